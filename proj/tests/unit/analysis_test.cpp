#include <gtest/gtest.h>

#include "exemplar/sparql/analysis.hpp"
#include "exemplar/sparql/parser.hpp"
#include "exemplar/sparql/serializer.hpp"

using namespace exemplar;
using namespace exemplar::sparql;

namespace {

const char* kFederated = R"(PREFIX up: <http://purl.uniprot.org/core/>
PREFIX rh: <http://rdf.rhea-db.org/>
SELECT ?protein ?reaction WHERE {
  ?protein up:annotation ?a .
  ?a up:catalyticActivity/up:catalyzedReaction ?reaction .
  OPTIONAL { ?protein up:mnemonic ?m }
  SERVICE <https://sparql.rhea-db.org/sparql> {
    ?reaction rh:side ?side .
    { SELECT ?side WHERE { ?side rh:contains ?c } }
  }
  FILTER EXISTS { ?protein up:reviewed true }
}
LIMIT 20)";

}  // namespace

TEST(Analysis, TriplePatternCountsByScope) {
  auto q = parse_query(kFederated);
  // 2 top-level + 1 optional + 1 in SERVICE + 1 in the sub-select; EXISTS not visited
  EXPECT_EQ(count_triple_patterns(q), 5u);
  EXPECT_EQ(count_triple_patterns(q, PatternScope::TopLevelOnly), 2u);
}

TEST(Analysis, PatternContextRecordsEnclosingConstructs) {
  auto q = parse_query(kFederated);
  auto patterns = extract_triple_patterns(q, PatternScope::AllGroups);
  ASSERT_EQ(patterns.size(), 5u);
  EXPECT_TRUE(patterns[0].context.empty());
  EXPECT_EQ(patterns[2].context, std::vector<std::string>{"Optional"});
  ASSERT_FALSE(patterns[3].context.empty());
  EXPECT_EQ(patterns[3].context[0], "Service(<https://sparql.rhea-db.org/sparql>)");
}

TEST(Analysis, ServiceEndpoints) {
  auto q = parse_query(kFederated);
  auto endpoints = service_endpoints(q);
  ASSERT_EQ(endpoints.size(), 1u);
  EXPECT_EQ(std::get<rdf::Iri>(endpoints[0]).value, "https://sparql.rhea-db.org/sparql");
  EXPECT_TRUE(is_federated(q));
  EXPECT_FALSE(is_federated(parse_query("SELECT * WHERE { ?s ?p ?o }")));
}

TEST(Analysis, WithLimitTakesMinimum) {
  auto q = parse_query(kFederated);
  EXPECT_EQ(with_limit(q, 1).limit, 1u);
  EXPECT_EQ(with_limit(q, 100).limit, 20u);
  auto unlimited = parse_query("SELECT * WHERE { ?s ?p ?o }");
  auto limited = with_limit(unlimited, 1);
  EXPECT_EQ(limited.limit, 1u);
  EXPECT_FALSE(unlimited.limit.has_value());
  EXPECT_NE(serialize_query(limited).find("LIMIT 1"), std::string::npos);
}

TEST(Analysis, WithLimitLeavesSubSelectsAlone) {
  auto q = parse_query("SELECT * WHERE { { SELECT ?s WHERE { ?s ?p ?o } LIMIT 50 } }");
  auto limited = with_limit(q, 1);
  const auto& sub = std::get<SubSelect>(limited.where->elements[0]);
  EXPECT_EQ(sub.query->limit, 50u);
  EXPECT_EQ(limited.limit, 1u);
}

TEST(Analysis, ProjectedVariables) {
  EXPECT_EQ(projected_variables(parse_query(kFederated)), (std::vector<std::string>{"protein", "reaction"}));
  auto star = parse_query(
      "SELECT * WHERE { ?a <http://p> ?b . { SELECT ?c WHERE { ?c <http://q> ?hidden } } "
      "MINUS { ?a <http://r> ?gone } BIND(1 AS ?d) }");
  EXPECT_EQ(projected_variables(star), (std::vector<std::string>{"a", "b", "c", "d"}));
  EXPECT_TRUE(projected_variables(parse_query("ASK { ?s ?p ?o }")).empty());
}

TEST(Analysis, PrefixCensusWorksOnUnparsableText) {
  auto usage = used_prefixes("PREFIX up: <http://x/> SELECT * WHERE { ?s up:a rh:b . ?s taxon:c \"up:not\" }");
  EXPECT_EQ(usage.declared, std::set<std::string>{"up"});
  EXPECT_EQ(usage.used, (std::set<std::string>{"rh", "taxon", "up"}));
  EXPECT_EQ(usage.undeclared(), (std::set<std::string>{"rh", "taxon"}));
}

TEST(Analysis, ForEachGroupVisitsEveryGroup) {
  auto q = parse_query(kFederated);
  std::size_t groups = 0;
  for_each_group(q, [&](GroupPattern&) { ++groups; });
  // where, optional, service, sub-select where, exists; `{ SELECT }` has no wrapper group
  EXPECT_EQ(groups, 5u);
}
