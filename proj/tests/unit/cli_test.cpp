#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "cli.hpp"
#include "exemplar/rdf/turtle.hpp"
#include "exemplar/store/example.hpp"
#include "fixtures.hpp"
#include "mock_endpoint.hpp"

using namespace exemplar;
namespace tst = exemplar::testing;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string path(const std::string& relative) { return tst::fixture(relative).string(); }

// the taxa example with its target replaced by `endpoint`, in a scratch corpus.
std::filesystem::path retargeted_taxa(const std::string& name, const std::string& endpoint) {
  auto dir = tst::scratch_dir(name);
  std::filesystem::create_directories(dir / "examples/UniProt");
  auto text = tst::slurp(tst::fixture("taxa/examples/UniProt/001.ttl"));
  const std::string from = "https://sparql.uniprot.org/sparql/";
  text.replace(text.find(from), from.size(), endpoint);
  std::ofstream(dir / "examples/UniProt/001.ttl") << text;
  return dir;
}

}  // namespace

TEST(Cli, ValidateExitCodes) {
  auto clean = run({"validate", path("taxa")});
  EXPECT_EQ(clean.code, cli::kExitOk) << clean.out;
  for (const char* rule : {"R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8"}) {
    SCOPED_TRACE(rule);
    const std::string r(rule);
    auto fail = run({"validate", path("rules/" + r + "-fail")});
    auto pass = run({"validate", path("rules/" + r + "-pass")});
    EXPECT_EQ(pass.code, cli::kExitOk) << pass.out;
    // R5 and R6 only warn in their mild form, the fail fixtures carry the error form
    EXPECT_EQ(fail.code, cli::kExitFailure) << fail.out;
    EXPECT_NE(fail.out.find(r), std::string::npos);
  }
  auto json = run({"validate", path("rules/R6-fail"), "--json"});
  EXPECT_EQ(json.code, cli::kExitFailure);
  EXPECT_TRUE(nlohmann::json::accept(json.out));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"validate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"validate", path("taxa"), "--bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"search", path("search-corpus"), "--q", "x", "--fields", "title"}).code, cli::kExitUsage);
  auto help = run({"--help"});
  EXPECT_EQ(help.code, cli::kExitOk);
  EXPECT_NE(help.out.find("validate"), std::string::npos);
}

TEST(Cli, NetworkCommandsNeedConsent) {
  auto queries = run({"test-queries", path("taxa")});
  EXPECT_EQ(queries.code, cli::kExitUsage);
  EXPECT_NE(queries.err.find("--remote"), std::string::npos);
  EXPECT_EQ(run({"test-federation", path("taxa")}).code, cli::kExitUsage);
}

TEST(Cli, Stats) {
  auto res = run({"stats", path("stats"), "--json"});
  ASSERT_EQ(res.code, cli::kExitOk) << res.err;
  auto doc = nlohmann::json::parse(res.out);
  ASSERT_EQ(doc["projects"].size(), 1u);
  const auto& proj = doc["projects"][0];
  EXPECT_EQ(proj["project"], "Proj");
  EXPECT_EQ(proj["examples"], 3);
  EXPECT_EQ(proj["parsed"], 2);
  EXPECT_EQ(proj["federated"], 1);
  EXPECT_EQ(proj["triplePatterns"], 4);
  EXPECT_DOUBLE_EQ(proj["meanTriplePatterns"].get<double>(), 2.0);
  ASSERT_EQ(doc["unparsed"].size(), 1u);
  EXPECT_EQ(doc["unparsed"][0]["file"], "examples/Proj/broken.ttl");
  auto text = run({"stats", path("stats")});
  EXPECT_NE(text.out.find("2.0"), std::string::npos) << text.out;
}

TEST(Cli, Search) {
  auto res = run({"search", path("search-corpus"), "--q", "Species"});
  EXPECT_EQ(res.code, cli::kExitOk);
  auto corpus = store::load_corpus(tst::fixture("search-corpus"));
  std::string expected;
  for (const auto& ex : store::search(corpus, "Species")) {
    expected += ex.id + "\t" + ex.preferred_question()->text + "\n";
  }
  EXPECT_EQ(res.out, expected);
  EXPECT_EQ(run({"search", path("search-corpus"), "--q", ""}).code, cli::kExitUsage);
}

TEST(Cli, FixPrintsDiffAndWrites) {
  auto dir = tst::scratch_dir("cli-fix");
  std::filesystem::copy_file(tst::fixture("fixer/hints.rq"), dir / "hints.rq");
  const auto original = tst::slurp(dir / "hints.rq");
  auto dry = run({"fix", (dir / "hints.rq").string()});
  EXPECT_EQ(dry.code, cli::kExitOk) << dry.err;
  EXPECT_NE(dry.out.find("\n-"), std::string::npos);
  EXPECT_NE(dry.out.find("1 of 1 queries need fixes"), std::string::npos) << dry.out;
  EXPECT_EQ(tst::slurp(dir / "hints.rq"), original);

  auto wrote = run({"fix", (dir / "hints.rq").string(), "--write"});
  EXPECT_EQ(wrote.code, cli::kExitOk);
  EXPECT_NE(tst::slurp(dir / "hints.rq"), original);
  auto again = run({"fix", (dir / "hints.rq").string()});
  EXPECT_NE(again.out.find("0 of 1"), std::string::npos) << again.out;

  auto unfixable = run({"fix", path("fixer/unknown-prefix.rq")});
  EXPECT_EQ(unfixable.code, cli::kExitFailure);
}

TEST(Cli, LineDiff) {
  EXPECT_EQ(cli::line_diff("a\nb\nc\n", "a\nc\nd\n"), " a\n-b\n c\n+d\n");
  EXPECT_EQ(cli::line_diff("", "x"), "+x\n");
}

TEST(Cli, CompileAndExport) {
  auto dir = tst::scratch_dir("cli-compile");
  auto out = (dir / "uniprot.ttl").string();
  auto res = run({"compile", path("taxa"), "--endpoint", "https://sparql.uniprot.org/sparql", "--out", out,
                  "--renumber"});
  ASSERT_EQ(res.code, cli::kExitOk) << res.err;
  auto triples = rdf::parse_turtle(tst::slurp(out)).triples;
  bool found = false;
  for (const auto& t : triples) {
    if (const auto* s = std::get_if<rdf::Iri>(&t.subject)) {
      found |= s->value == "https://sparql.uniprot.org/.well-known/sparql-examples/1";
    }
  }
  EXPECT_TRUE(found);

  auto json_out = (dir / "examples.json").string();
  EXPECT_EQ(run({"export-json", path("search-corpus"), "--out", json_out}).code, cli::kExitOk);
  EXPECT_EQ(nlohmann::json::parse(tst::slurp(json_out)).size(), 7u);

  auto site = dir / "site";
  EXPECT_EQ(run({"viz", path("taxa"), "--out", site.string()}).code, cli::kExitOk);
  EXPECT_FALSE(std::filesystem::is_empty(site));
}

TEST(Cli, TestQueriesAgainstMock) {
  tst::MockEndpoint mock(tst::personality_handler({}));
  auto corpus = retargeted_taxa("cli-queries", mock.url());
  auto res = run({"test-queries", corpus.string(), "--endpoint", mock.url(), "--json"});
  EXPECT_EQ(res.code, cli::kExitOk) << res.out << res.err;
  auto doc = nlohmann::json::parse(res.out);
  ASSERT_EQ(doc.size(), 1u);
  EXPECT_EQ(doc[0]["status"], "pass");
  ASSERT_EQ(mock.request_count(), 1u);
  EXPECT_NE(mock.requests()[0].query.find("LIMIT 1"), std::string::npos);
}

TEST(Cli, EmptyResultsFailUnlessAllowed) {
  tst::MockEndpoint mock([](const tst::RecordedRequest&) { return tst::bindings_reply({"taxon"}, {}); });
  auto corpus = retargeted_taxa("cli-empty", mock.url());
  EXPECT_EQ(run({"test-queries", corpus.string(), "--endpoint", mock.url()}).code, cli::kExitFailure);
  EXPECT_EQ(run({"test-queries", corpus.string(), "--endpoint", mock.url(), "--allow-empty"}).code,
            cli::kExitOk);
}

TEST(Cli, DeadEndpointFails) {
  auto dead = tst::dead_endpoint_url();
  auto corpus = retargeted_taxa("cli-dead", dead);
  EXPECT_EQ(run({"test-queries", corpus.string(), "--endpoint", dead, "--timeout-ms", "500"}).code,
            cli::kExitFailure);
  EXPECT_EQ(run({"check", "--endpoint", dead, "--timeout-ms", "500"}).code, cli::kExitFailure);
}
