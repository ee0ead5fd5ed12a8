#include <gtest/gtest.h>

#include <atomic>
#include <json.hpp>

#include "exemplar/client/sparql_client.hpp"
#include "exemplar/publish/publish.hpp"
#include "exemplar/sparql/parser.hpp"
#include "fixtures.hpp"
#include "json_schema.hpp"
#include "mock_endpoint.hpp"

using namespace exemplar;
using namespace std::chrono_literals;
namespace tst = exemplar::testing;
using exemplar::testing::MockEndpoint;
using exemplar::testing::MockReply;
using exemplar::testing::RecordedRequest;

namespace {

store::Corpus retarget(store::Corpus corpus, const std::string& endpoint) {
  for (auto& ex : corpus.examples) ex.targets = {endpoint};
  return store::make_corpus(std::move(corpus.examples), corpus.prefix_registry);
}

store::Corpus sample_corpus() {
  return store::load_corpus(exemplar::testing::source_path("data/sample-corpus"));
}

client::ExecuteOptions quick() {
  client::ExecuteOptions o;
  o.timeout = 2000ms;
  return o;
}

tst::Personality full_personality(const std::string& endpoint) {
  tst::Personality p;
  p.examples_graph = publish::examples_graph_iri(endpoint);
  p.example_count = 3;
  p.classes = {{"http://purl.uniprot.org/core/Protein", 10}, {"http://purl.uniprot.org/core/Taxon", 4}};
  p.links = {{"http://purl.uniprot.org/core/Protein", "http://purl.uniprot.org/core/organism",
              "http://purl.uniprot.org/core/Taxon", 10}};
  return p;
}

}  // namespace

TEST(ClientUrl, Parse) {
  auto u = client::parse_url("https://SPARQL.UniProt.org/sparql/?a=b");
  EXPECT_EQ(u.scheme, "https");
  EXPECT_EQ(u.host, "sparql.uniprot.org");
  EXPECT_EQ(u.port, 443);
  EXPECT_EQ(u.path, "/sparql/?a=b");
  EXPECT_EQ(client::parse_url("http://h:8890").path, "/");
  EXPECT_EQ(client::parse_url("http://h:8890").port, 8890);
  EXPECT_THROW(client::parse_url("ftp://h/"), std::invalid_argument);
  EXPECT_THROW(client::parse_url("not a url"), std::invalid_argument);
}

TEST(ClientParse, JsonBindings) {
  auto r = client::parse_response(R"({"head":{"vars":["s","n","l"]},"results":{"bindings":[
    {"s":{"type":"uri","value":"http://e/a"},"n":{"type":"literal","value":"3","datatype":"http://www.w3.org/2001/XMLSchema#integer"},
     "l":{"type":"literal","value":"chat","xml:lang":"fr"}},
    {"s":{"type":"bnode","value":"b0"}}]}})",
                                  "application/sparql-results+json");
  EXPECT_EQ(r.kind, client::SparqlResponse::Kind::Bindings);
  EXPECT_EQ(r.variables, (std::vector<std::string>{"s", "n", "l"}));
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].at("s"), rdf::Term(rdf::Iri{"http://e/a"}));
  EXPECT_EQ(r.rows[0].at("n"), rdf::Term(rdf::Literal::typed("3", rdf::vocab::kXsdInteger)));
  EXPECT_EQ(r.rows[0].at("l"), rdf::Term(rdf::Literal::tagged("chat", "fr")));
  EXPECT_FALSE(r.rows[1].contains("n"));
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(ClientParse, BooleanAndGraph) {
  auto b = client::parse_response(R"({"head":{},"boolean":true})", "application/sparql-results+json");
  EXPECT_EQ(b.kind, client::SparqlResponse::Kind::Boolean);
  EXPECT_TRUE(b.boolean);
  EXPECT_EQ(b.result_count(), 1u);
  auto g = client::parse_response("<http://a> <http://b> <http://c> .\n", "text/turtle");
  EXPECT_EQ(g.kind, client::SparqlResponse::Kind::Graph);
  EXPECT_EQ(g.result_count(), 1u);
}

TEST(ClientParse, SniffsMislabelledBodies) {
  auto r = client::parse_response(R"({"head":{"vars":[]},"results":{"bindings":[]}})", "text/plain");
  EXPECT_EQ(r.kind, client::SparqlResponse::Kind::Bindings);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_NE(r.diagnostics[0].find("JSON"), std::string::npos);
  auto t = client::parse_response("@prefix e: <http://e/> .\ne:a e:b e:c .", "application/json");
  EXPECT_EQ(t.kind, client::SparqlResponse::Kind::Graph);
  EXPECT_FALSE(t.diagnostics.empty());
  try {
    client::parse_response("<?xml version=\"1.0\"?><sparql/>", "application/sparql-results+xml");
    FAIL();
  } catch (const client::ClientError& e) {
    EXPECT_EQ(e.kind(), client::ClientError::Kind::Parse);
  }
  EXPECT_THROW(client::parse_response("{not json", "application/json"), client::ClientError);
}

TEST(ClientExecute, GetForShortPostForLong) {
  MockEndpoint mock(tst::personality_handler({}));
  client::execute(mock.url(), "ASK { }", quick());
  auto opts = quick();
  opts.max_get_url = 10;
  client::execute(mock.url(), "ASK { ?s ?p ?o }", opts);
  auto reqs = mock.requests();
  ASSERT_EQ(reqs.size(), 2u);
  EXPECT_EQ(reqs[0].method, "GET");
  EXPECT_EQ(reqs[0].query, "ASK { }");
  EXPECT_EQ(reqs[0].accept, client::kDefaultAccept);
  EXPECT_EQ(reqs[1].method, "POST");
  EXPECT_EQ(reqs[1].content_type, "application/x-www-form-urlencoded");
  EXPECT_EQ(reqs[1].query, "ASK { ?s ?p ?o }");
}

TEST(ClientExecute, ReservedCharactersSurviveEncoding) {
  MockEndpoint mock(tst::personality_handler({}));
  const std::string q = "SELECT * WHERE { ?s ?p \"a&b=c+d %20 é#\" }";
  client::execute(mock.url(), q, quick());
  auto opts = quick();
  opts.method = client::Method::Post;
  client::execute(mock.url(), q, opts);
  for (const auto& r : mock.requests()) EXPECT_EQ(r.query, q) << r.method;
}

TEST(ClientExecute, HttpErrorsCarryStatusAndExcerpt) {
  MockEndpoint mock([](const RecordedRequest&) { return MockReply{500, "text/plain", "Virtuoso 37000 Error", {}}; });
  try {
    client::execute(mock.url(), "ASK { }", quick());
    FAIL();
  } catch (const client::ClientError& e) {
    EXPECT_EQ(e.kind(), client::ClientError::Kind::Http);
    EXPECT_EQ(e.http_status(), 500);
    EXPECT_EQ(e.body_excerpt(), "Virtuoso 37000 Error");
  }
  EXPECT_EQ(mock.request_count(), 1u);  // HTTP errors are not retried
}

TEST(ClientExecute, DeadEndpointIsTransportError) {
  auto opts = quick();
  opts.retries = 2;
  try {
    client::execute(tst::dead_endpoint_url(), "ASK { }", opts);
    FAIL();
  } catch (const client::ClientError& e) {
    EXPECT_EQ(e.kind(), client::ClientError::Kind::Transport);
  }
}

TEST(ClientExecute, SlowEndpointTimesOut) {
  MockEndpoint mock([](const RecordedRequest&) {
    auto r = tst::boolean_reply(true);
    r.delay = 1500ms;
    return r;
  });
  client::ExecuteOptions opts;
  opts.timeout = 200ms;
  opts.retries = 0;
  auto start = std::chrono::steady_clock::now();
  try {
    client::execute(mock.url(), "ASK { }", opts);
    FAIL();
  } catch (const client::ClientError& e) {
    EXPECT_EQ(e.kind(), client::ClientError::Kind::Timeout);
  }
  EXPECT_LT(std::chrono::steady_clock::now() - start, 1400ms);
}

TEST(ClientExecute, ForwardKeepsBodyVerbatim) {
  const std::string body = "{ \"head\" : {}, \"boolean\" : false }\n";
  MockEndpoint mock([&](const RecordedRequest&) { return MockReply{200, "application/sparql-results+json", body, {}}; });
  auto raw = client::forward(mock.url(), "ASK { }", "application/sparql-results+json", quick());
  EXPECT_EQ(raw.status, 200);
  EXPECT_EQ(raw.body, body);
  EXPECT_EQ(raw.content_type, "application/sparql-results+json");
}

TEST(ClientRegression, LimitOneOnEveryNonAskRequest) {
  MockEndpoint mock(tst::personality_handler({}));
  auto corpus = retarget(sample_corpus(), mock.url());
  client::ExampleTestOptions opts;
  opts.execute = quick();
  auto results = client::test_examples(corpus, opts);
  ASSERT_EQ(results.size(), corpus.examples.size());
  for (const auto& r : results) EXPECT_EQ(r.status, client::TestStatus::Pass) << r.example_id << ": " << r.detail;

  auto reqs = mock.requests();
  ASSERT_EQ(reqs.size(), corpus.examples.size());
  std::size_t asks = 0;
  for (const auto& req : reqs) {
    auto sent = sparql::parse_query(req.query);
    if (sent.form == sparql::QueryForm::Ask) {
      ++asks;
      bool matches_an_original = false;
      for (const auto& ex : corpus.examples) matches_an_original = matches_an_original || ex.query_text == req.query;
      EXPECT_TRUE(matches_an_original) << req.query;
    } else {
      EXPECT_EQ(sent.limit, std::optional<std::uint64_t>(1)) << req.query;
    }
  }
  EXPECT_GT(asks, 0u);
}

TEST(ClientRegression, EmptyAndErrorStatuses) {
  MockEndpoint mock([](const RecordedRequest& r) {
    if (r.query.find("empty") != std::string::npos) return tst::bindings_reply({"s"}, {});
    return MockReply{400, "text/plain", "syntax error", {}};
  });
  store::QueryExample ex;
  ex.id = "x";
  ex.query_text = "SELECT ?s WHERE { ?s <http://e/empty> ?o }";
  EXPECT_EQ(client::test_example(ex, mock.url(), {}, quick()).status, client::TestStatus::Empty);
  ex.query_text = "SELECT ?s WHERE { ?s <http://e/other> ?o }";
  auto failed = client::test_example(ex, mock.url(), {}, quick());
  EXPECT_EQ(failed.status, client::TestStatus::Error);
  EXPECT_NE(failed.detail.find("400"), std::string::npos);
  ex.query_text = "SELECT ?s WHERE { ?s ?p }";
  EXPECT_EQ(client::test_example(ex, mock.url(), {}, quick()).status, client::TestStatus::Error);
}

TEST(ClientProbe, AskThenSelectFallback) {
  MockEndpoint good(tst::personality_handler({}));
  auto alive = client::probe_endpoint(good.url(), quick());
  EXPECT_TRUE(alive.alive);
  EXPECT_FALSE(alive.used_fallback);

  tst::Personality no_ask;
  no_ask.ask_supported = false;
  MockEndpoint picky(tst::personality_handler(no_ask));
  auto fallback = client::probe_endpoint(picky.url(), quick());
  EXPECT_TRUE(fallback.alive);
  EXPECT_TRUE(fallback.used_fallback);
  auto reqs = picky.requests();
  ASSERT_EQ(reqs.size(), 2u);
  EXPECT_EQ(reqs[0].query, client::kAskProbe);
  EXPECT_EQ(reqs[1].query, client::kSelectProbe);

  auto opts = quick();
  opts.retries = 0;
  EXPECT_FALSE(client::probe_endpoint(tst::dead_endpoint_url(), opts).alive);
}

TEST(ClientPolite, PerHostSerialAndConcurrencyCap) {
  const std::vector<std::string> hosts = {"a", "a", "a", "b", "b", "c", "c", "d"};
  std::mutex m;
  std::map<std::string, int> active_by_host;
  int active = 0, max_active = 0;
  bool host_overlap = false;
  std::atomic<int> done{0};
  client::PoliteOptions opts;
  opts.max_concurrency = 2;
  client::run_polite(
      hosts,
      [&](std::size_t i) {
        {
          std::lock_guard lock(m);
          if (++active_by_host[hosts[i]] > 1) host_overlap = true;
          max_active = std::max(max_active, ++active);
        }
        std::this_thread::sleep_for(20ms);
        {
          std::lock_guard lock(m);
          --active_by_host[hosts[i]];
          --active;
        }
        ++done;
      },
      [](std::size_t) { FAIL() << "nothing should be skipped"; }, opts);
  EXPECT_EQ(done.load(), 8);
  EXPECT_FALSE(host_overlap);
  EXPECT_LE(max_active, 2);
  EXPECT_EQ(max_active, 2);
}

TEST(ClientPolite, SameHostRequestsNeverOverlapOnTheWire) {
  MockEndpoint mock([](const RecordedRequest&) {
    auto r = tst::boolean_reply(true);
    r.delay = 30ms;
    return r;
  });
  std::vector<std::string> hosts(6, "127.0.0.1");
  client::PoliteOptions opts;
  opts.max_concurrency = 4;
  client::run_polite(
      hosts, [&](std::size_t) { client::execute(mock.url(), "ASK { }", quick()); }, [](std::size_t) {}, opts);
  EXPECT_EQ(mock.request_count(), 6u);
  EXPECT_EQ(mock.max_in_flight(), 1u);

  MockEndpoint parallel([](const RecordedRequest&) {
    auto r = tst::boolean_reply(true);
    r.delay = 100ms;
    return r;
  });
  opts.per_host_serial = false;
  client::run_polite(
      hosts, [&](std::size_t) { client::execute(parallel.url(), "ASK { }", quick()); }, [](std::size_t) {}, opts);
  EXPECT_GT(parallel.max_in_flight(), 1u);
  EXPECT_LE(parallel.max_in_flight(), 4u);
}

TEST(ClientPolite, StopTokenSkipsRemainingWork) {
  std::stop_source source;
  client::PoliteOptions opts;
  opts.max_concurrency = 1;
  opts.stop = source.get_token();
  std::vector<std::size_t> ran, skipped;
  client::run_polite(
      std::vector<std::string>(5, "h"),
      [&](std::size_t i) {
        ran.push_back(i);
        source.request_stop();
      },
      [&](std::size_t i) { skipped.push_back(i); }, opts);
  EXPECT_EQ(ran, std::vector<std::size_t>{0});
  EXPECT_EQ(skipped, (std::vector<std::size_t>{1, 2, 3, 4}));
}

TEST(ClientFederation, MembersOfSampleCorpus) {
  auto members = client::federation_members(sample_corpus());
  ASSERT_EQ(members.size(), 2u);
  EXPECT_TRUE(members.contains("https://sparql.rhea-db.org/sparql"));
  EXPECT_TRUE(members.contains("https://sparql.uniprot.org/sparql"));
}

TEST(ClientFederation, ProbesEachMemberOnce) {
  MockEndpoint mock(tst::personality_handler({}));
  auto dead = tst::dead_endpoint_url();
  auto make = [](const std::string& id, const std::string& service) {
    store::QueryExample ex;
    ex.id = id;
    ex.query_text = "SELECT * WHERE { SERVICE <" + service + "> { ?s ?p ?o } }";
    ex.targets = {"https://example.org/sparql"};
    return ex;
  };
  auto corpus = store::make_corpus({make("e1", mock.url()), make("e2", mock.url()), make("e3", dead)});
  client::ExecuteOptions exec = quick();
  exec.retries = 0;
  auto results = client::test_federation_members(corpus, {}, exec);
  ASSERT_EQ(results.size(), 2u);
  std::map<std::string, client::FederationMemberResult> by_endpoint;
  for (const auto& r : results) by_endpoint[r.endpoint] = r;
  EXPECT_EQ(by_endpoint[mock.url()].status, client::TestStatus::Pass);
  EXPECT_EQ(by_endpoint[mock.url()].used_by, (std::vector<std::string>{"e1", "e2"}));
  EXPECT_EQ(by_endpoint[dead].status, client::TestStatus::Error);
  EXPECT_EQ(mock.request_count(), 1u);
}

TEST(ClientVoid, SummaryFromPartitions) {
  MockEndpoint mock([](const RecordedRequest&) { return MockReply{}; });
  mock.set_handler(tst::personality_handler(full_personality(mock.url())));
  client::VoidOptions opts;
  opts.execute = quick();
  auto summary = client::summarize_void(mock.url(), opts);
  ASSERT_EQ(summary.classes.size(), 2u);
  EXPECT_EQ(summary.classes[0], (client::VoidClass{"http://purl.uniprot.org/core/Protein", 10}));
  ASSERT_EQ(summary.links.size(), 1u);
  EXPECT_EQ(summary.links[0].property, "http://purl.uniprot.org/core/organism");
  EXPECT_TRUE(summary.diagnostics.empty());
  auto doc = nlohmann::json::parse(summary.to_json());
  EXPECT_TRUE(exemplar::testing::schema_violations(doc, exemplar::testing::load_schema("void-summary.schema.json")).empty());
  EXPECT_EQ(doc["links"][0]["triples"], 10);

  MockEndpoint bare(tst::personality_handler({}));
  auto empty = client::summarize_void(bare.url(), opts);
  EXPECT_TRUE(empty.empty());
  EXPECT_FALSE(empty.diagnostics.empty());
}

TEST(ClientCheck, ThreePersonalities) {
  const std::vector<std::string> names = {"examples_graph_present", "examples_count>0", "void_present",
                                          "service_alive"};
  client::CheckOptions opts;
  opts.execute = quick();
  opts.execute.retries = 0;
  opts.void_options.execute = opts.execute;
  auto verdicts = [&](const client::CheckReport& r) {
    std::vector<std::pair<std::string, bool>> out;
    for (const auto& c : r.criteria) {
      out.emplace_back(c.name, c.passed);
      if (!c.passed) EXPECT_FALSE(c.remedy.empty()) << c.name;
    }
    return out;
  };
  auto schema = exemplar::testing::load_schema("check-report.schema.json");

  MockEndpoint full([](const RecordedRequest&) { return MockReply{}; });
  full.set_handler(tst::personality_handler(full_personality(full.url())));
  auto r1 = client::check_endpoint(full.url(), opts);
  EXPECT_EQ(verdicts(r1), (std::vector<std::pair<std::string, bool>>{
                              {names[0], true}, {names[1], true}, {names[2], true}, {names[3], true}}));
  EXPECT_TRUE(r1.passed());

  MockEndpoint no_void([](const RecordedRequest&) { return MockReply{}; });
  auto p = full_personality(no_void.url());
  p.classes.clear();
  p.links.clear();
  no_void.set_handler(tst::personality_handler(p));
  auto r2 = client::check_endpoint(no_void.url(), opts);
  EXPECT_EQ(verdicts(r2), (std::vector<std::pair<std::string, bool>>{
                              {names[0], true}, {names[1], true}, {names[2], false}, {names[3], true}}));

  auto r3 = client::check_endpoint(tst::dead_endpoint_url(), opts);
  EXPECT_EQ(verdicts(r3), (std::vector<std::pair<std::string, bool>>{
                              {names[0], false}, {names[1], false}, {names[2], false}, {names[3], false}}));
  EXPECT_FALSE(r3.passed());

  for (const auto* r : {&r1, &r2, &r3}) {
    auto doc = nlohmann::json::parse(r->to_json());
    EXPECT_TRUE(exemplar::testing::schema_violations(doc, schema).empty()) << doc.dump(2);
  }
}
