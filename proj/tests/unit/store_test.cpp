#include <gtest/gtest.h>

#include <regex>

#include "exemplar/store/example.hpp"
#include "fixtures.hpp"

using namespace exemplar;
using exemplar::testing::fixture;
using exemplar::testing::slurp;

namespace {

const std::string kSearchNs = "https://example.org/.well-known/sparql-examples/";

// Reads ids and question literals straight from the Turtle text with a regex,
// without going through the loader.
std::vector<std::string> scan_questions(const std::filesystem::path& root, const std::string& needle) {
  static const std::regex subject(R"re(\nex:(\w+) a )re");
  static const std::regex comment(R"re(rdfs:comment "([^"]*)")re");
  std::vector<std::string> ids;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.path().extension() != ".ttl") continue;
    const auto text = slurp(e.path());
    std::smatch s;
    if (!std::regex_search(text, s, subject)) continue;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), comment); it != std::sregex_iterator(); ++it) {
      if ((*it)[1].str().find(needle) != std::string::npos) {
        ids.push_back(kSearchNs + s[1].str());
        break;
      }
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<std::string> ids_of(const std::vector<store::QueryExample>& examples) {
  std::vector<std::string> out;
  for (const auto& e : examples) out.push_back(e.id);
  return out;
}

}  // namespace

TEST(Store, TaxaExampleFields) {
  auto corpus = store::load_corpus(fixture("taxa"));
  ASSERT_TRUE(corpus.issues.empty());
  ASSERT_EQ(corpus.examples.size(), 1u);
  const auto& ex = corpus.examples[0];
  EXPECT_EQ(ex.id, "https://sparql.uniprot.org/.well-known/sparql-examples/001");
  EXPECT_EQ(ex.query_type, store::QueryType::Select);
  ASSERT_EQ(ex.questions.size(), 1u);
  EXPECT_EQ(ex.questions[0].text, "Select all taxa from the UniProt taxonomy");
  EXPECT_EQ(ex.questions[0].lang, "en");
  EXPECT_EQ(ex.targets, std::vector<std::string>{"https://sparql.uniprot.org/sparql/"});
  EXPECT_EQ(ex.keywords, std::vector<std::string>{"taxa"});
  EXPECT_EQ(ex.project, "UniProt");
  EXPECT_EQ(ex.source_path, "examples/UniProt/001.ttl");
  EXPECT_TRUE(ex.has_prefixes_link);
  EXPECT_FALSE(ex.declared_federated);
  EXPECT_NE(ex.query_text.find("?taxon a up:Taxon ."), std::string::npos);
}

TEST(Store, QuestionSearchSearchMatchesBruteForceScan) {
  auto root = fixture("search-corpus");
  auto corpus = store::load_corpus(root);
  ASSERT_EQ(corpus.examples.size(), 7u);
  for (const char* needle : {"species", "Species", "SPECIES", "s", "liver", "nothing-matches"}) {
    SCOPED_TRACE(needle);
    EXPECT_EQ(ids_of(store::search(corpus, needle)), scan_questions(root, needle));
  }
}

TEST(Store, SearchIsCaseSensitive) {
  auto corpus = store::load_corpus(fixture("search-corpus"));
  auto lower = ids_of(store::search(corpus, "species"));
  auto upper = ids_of(store::search(corpus, "Species"));
  EXPECT_NE(lower, upper);
  EXPECT_EQ(lower, (std::vector<std::string>{kSearchNs + "a1", kSearchNs + "b1", kSearchNs + "b2"}));
  EXPECT_EQ(upper, std::vector<std::string>{kSearchNs + "a2"});
}

TEST(Store, SearchOtherFields) {
  auto corpus = store::load_corpus(fixture("search-corpus"));
  EXPECT_EQ(ids_of(store::search(corpus, "SPECIES", {store::SearchField::Keywords})),
            std::vector<std::string>{kSearchNs + "b2"});
  auto by_query = store::search(corpus, "COUNT", {store::SearchField::Query});
  for (const auto& ex : by_query) EXPECT_NE(ex.query_text.find("COUNT"), std::string::npos);
  EXPECT_THROW(store::search(corpus, ""), std::invalid_argument);
  EXPECT_EQ(store::parse_search_field("keywords"), store::SearchField::Keywords);
  EXPECT_FALSE(store::parse_search_field("title").has_value());
}

TEST(Store, PreferredQuestionIsEnglish) {
  store::QueryExample ex;
  ex.questions = {{"Liste", "fr"}, {"List", "en"}, {"Lista", "es"}};
  EXPECT_EQ(ex.preferred_question()->text, "List");
  auto display = ex.questions_for_display();
  EXPECT_EQ(display[0].lang, "en");
  EXPECT_EQ(display[1].lang, "fr");
  EXPECT_EQ(display[2].lang, "es");
}

TEST(Store, ProjectPrefixesReachExamples) {
  auto corpus = store::load_corpus(fixture("rules/R7-pass"));
  ASSERT_EQ(corpus.examples.size(), 1u);
  EXPECT_EQ(corpus.examples[0].prefix_decls.find("rh"), std::optional<std::string>("http://rdf.rhea-db.org/"));
  EXPECT_TRUE(corpus.prefix_registry.contains("rh"));
}

TEST(Store, DuplicateIdKeepsFirstAndReportsSecond) {
  auto corpus = store::load_corpus(fixture("rules/R8-fail"));
  ASSERT_EQ(corpus.examples.size(), 1u);
  EXPECT_EQ(corpus.examples[0].source_path, "examples/Test/001.ttl");
  ASSERT_EQ(corpus.issues.size(), 1u);
  EXPECT_EQ(corpus.issues[0].kind, store::LoadError::Kind::DuplicateId);
  EXPECT_EQ(corpus.issues[0].path, "examples/Test/002.ttl");
}

TEST(Store, LoaderErrors) {
  const std::string head =
      "@prefix sh: <http://www.w3.org/ns/shacl#> .\n@prefix ex: <http://e/> .\n"
      "@prefix schema: <https://schema.org/> .\n";
  auto kind_of = [&](const std::string& body) {
    try {
      store::load_example_text(head + body, "x.ttl", "P", {});
    } catch (const store::LoadError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "loaded: " << body;
    return store::LoadError::Kind::Io;
  };
  EXPECT_EQ(kind_of("ex:a ex:b ex:c ."), store::LoadError::Kind::NoExecutable);
  EXPECT_EQ(kind_of("ex:a a sh:SPARQLExecutable ."), store::LoadError::Kind::QueryText);
  EXPECT_EQ(kind_of("ex:a a sh:SPARQLExecutable ; sh:select \"SELECT * {}\" ; sh:ask \"ASK {}\" ."),
            store::LoadError::Kind::QueryText);
  EXPECT_EQ(kind_of("ex:a a sh:SPARQLAskExecutable ; sh:select \"SELECT * {}\" ."),
            store::LoadError::Kind::TypeMismatch);
  EXPECT_EQ(kind_of("ex:a a sh:SPARQLExecutable ; sh:select \"SELECT * {}\" ; schema:target \"x\" ."),
            store::LoadError::Kind::BadTarget);
  EXPECT_EQ(kind_of("ex:a ex:b"), store::LoadError::Kind::Turtle);
  EXPECT_THROW(store::load_corpus(fixture("does-not-exist")), store::LoadError);
}

TEST(Store, FederationMarkers) {
  const std::string head =
      "@prefix sh: <http://www.w3.org/ns/shacl#> .\n@prefix ex: <http://e/> .\n"
      "@prefix schema: <https://schema.org/> .\n";
  auto kw = store::load_example_text(
      head + "ex:a a sh:SPARQLExecutable ; sh:select \"SELECT * {}\" ; schema:keywords \"Federated\" .", "x.ttl",
      "P", {});
  EXPECT_TRUE(kw.declared_federated);
  auto type = store::load_example_text(
      head + "ex:a a sh:SPARQLExecutable, <https://example.org/FederatedQuery> ; sh:select \"SELECT * {}\" .",
      "x.ttl", "P", {});
  EXPECT_TRUE(type.declared_federated);
}

TEST(Store, StatsOverSmallFixture) {
  auto corpus = store::load_corpus(fixture("stats"));
  auto s = store::stats(corpus);
  ASSERT_EQ(s.projects.size(), 1u);
  const auto& p = s.projects[0];
  EXPECT_EQ(p.project, "Proj");
  EXPECT_EQ(p.example_count, 3u);
  EXPECT_EQ(p.parsed_count, 2u);
  EXPECT_EQ(p.federated_count, 1u);
  EXPECT_EQ(p.triple_patterns, 4u);
  EXPECT_DOUBLE_EQ(p.mean_triple_patterns, 2.0);
  EXPECT_EQ(s.total.project, "all");
  EXPECT_DOUBLE_EQ(s.total.mean_triple_patterns, 2.0);
  ASSERT_EQ(s.unparsed.size(), 1u);
  EXPECT_EQ(s.unparsed[0].example_id, kSearchNs + "broken");
}

TEST(Store, TargetEndpointsAreDistinct) {
  auto corpus = store::load_corpus(exemplar::testing::source_path("data/sample-corpus"));
  auto targets = corpus.target_endpoints();
  EXPECT_TRUE(std::is_sorted(targets.begin(), targets.end()));
  EXPECT_EQ(std::set<std::string>(targets.begin(), targets.end()).size(), targets.size());
  EXPECT_EQ(corpus.projects, (std::vector<std::string>{"Bgee", "OMA", "Rhea", "UniProt"}));
  EXPECT_EQ(corpus.examples.size(), 22u);
}
