#include "exemplar/client/sparql_client.hpp"

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <json.hpp>
#include <mutex>
#include <set>
#include <thread>

#include "exemplar/publish/publish.hpp"
#include "exemplar/rdf/turtle.hpp"
#include "exemplar/sparql/analysis.hpp"
#include "exemplar/sparql/parser.hpp"
#include "exemplar/sparql/serializer.hpp"

namespace exemplar::client {

using Clock = std::chrono::steady_clock;
using std::chrono::milliseconds;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) && u < 0x80) {
      out += c;
    } else if (c == '-' || c == '_' || c == '.' || c == '~') {
      out += c;
    } else {
      out += '%';
      out += kHex[u >> 4];
      out += kHex[u & 0xF];
    }
  }
  return out;
}

std::string excerpt(std::string_view body) {
  constexpr std::size_t kMax = 200;
  return std::string(body.substr(0, kMax));
}

std::string media_type(std::string_view content_type) {
  return lower(trim(content_type.substr(0, content_type.find(';'))));
}

enum class Syntax { Json, Turtle, Xml, Unknown };

Syntax declared_syntax(const std::string& media) {
  if (media == "application/sparql-results+json" || media == "application/json") return Syntax::Json;
  if (media == "text/turtle" || media == "application/x-turtle" || media == "application/turtle" ||
      media == "text/n3" || media == "application/n-triples") {
    return Syntax::Turtle;
  }
  if (media == "application/sparql-results+xml" || media == "application/rdf+xml" ||
      media == "application/xml" || media == "text/xml") {
    return Syntax::Xml;
  }
  return Syntax::Unknown;
}

Syntax sniff(std::string_view body) {
  auto pos = body.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
  if (pos == std::string_view::npos) return Syntax::Unknown;
  std::string_view rest = body.substr(pos);
  if (rest.front() == '{') return Syntax::Json;
  if (rest.starts_with("<?xml") || rest.starts_with("<sparql") || rest.starts_with("<rdf:RDF")) {
    return Syntax::Xml;
  }
  if (rest.front() == '<' || rest.front() == '@' || rest.front() == '#' || rest.starts_with("_:") ||
      lower(rest.substr(0, 6)) == "prefix" || lower(rest.substr(0, 4)) == "base") {
    return Syntax::Turtle;
  }
  return Syntax::Unknown;
}

std::string_view syntax_name(Syntax s) {
  switch (s) {
    case Syntax::Json: return "JSON";
    case Syntax::Turtle: return "Turtle";
    case Syntax::Xml: return "XML";
    case Syntax::Unknown: return "unknown";
  }
  return "unknown";
}

rdf::Term json_term(const nlohmann::json& j) {
  const std::string type = j.value("type", "");
  const std::string value = j.value("value", "");
  if (type == "uri") return rdf::Iri{value};
  if (type == "bnode") return rdf::BlankNode{value};
  if (type == "literal" || type == "typed-literal") {
    if (j.contains("xml:lang")) return rdf::Literal::tagged(value, j["xml:lang"].get<std::string>());
    if (j.contains("datatype")) return rdf::Literal::typed(value, j["datatype"].get<std::string>());
    return rdf::Literal::plain(value);
  }
  throw ClientError(ClientError::Kind::Parse, "unknown RDF term type in results: " + type);
}

void parse_json_results(std::string_view body, SparqlResponse& out) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ClientError(ClientError::Kind::Parse, std::string("malformed JSON results: ") + e.what(), 0,
                      excerpt(body));
  }
  if (!doc.is_object()) throw ClientError(ClientError::Kind::Parse, "JSON results are not an object");
  if (doc.contains("boolean")) {
    if (!doc["boolean"].is_boolean()) {
      throw ClientError(ClientError::Kind::Parse, "\"boolean\" member is not a boolean");
    }
    out.kind = SparqlResponse::Kind::Boolean;
    out.boolean = doc["boolean"].get<bool>();
    return;
  }
  if (!doc.contains("results") || !doc["results"].is_object() ||
      !doc["results"].contains("bindings") || !doc["results"]["bindings"].is_array()) {
    throw ClientError(ClientError::Kind::Parse, "JSON results have neither boolean nor results.bindings",
                      0, excerpt(body));
  }
  out.kind = SparqlResponse::Kind::Bindings;
  if (doc.contains("head") && doc["head"].contains("vars") && doc["head"]["vars"].is_array()) {
    for (const auto& v : doc["head"]["vars"]) out.variables.push_back(v.get<std::string>());
  }
  for (const auto& b : doc["results"]["bindings"]) {
    if (!b.is_object()) throw ClientError(ClientError::Kind::Parse, "binding is not an object");
    Row row;
    for (const auto& [name, term] : b.items()) row.emplace(name, json_term(term));
    out.rows.push_back(std::move(row));
  }
}

void parse_turtle_results(std::string_view body, SparqlResponse& out) {
  try {
    out.triples = rdf::parse_turtle(body).triples;
    out.kind = SparqlResponse::Kind::Graph;
  } catch (const rdf::TurtleError& e) {
    throw ClientError(ClientError::Kind::Parse, std::string("malformed Turtle results: ") + e.what(), 0,
                      excerpt(body));
  }
}

bool is_timeout(httplib::Error error, Clock::duration elapsed, milliseconds timeout) {
  if (error == httplib::Error::ConnectionTimeout) return true;
  return error == httplib::Error::Read && elapsed >= timeout - milliseconds(50);
}

struct Exchange {
  int status = 0;
  std::string content_type;
  std::string body;
  milliseconds latency{0};
};

Exchange send(const std::string& endpoint, const std::string& query, const std::string& accept,
              const ExecuteOptions& options) {
  Url url;
  try {
    url = parse_url(endpoint);
  } catch (const std::invalid_argument& e) {
    throw ClientError(ClientError::Kind::Transport, e.what());
  }
  const std::string encoded = percent_encode(query);
  const std::string get_path =
      url.path + (url.path.find('?') == std::string::npos ? "?" : "&") + "query=" + encoded;
  bool use_get = options.method == Method::Get ||
                 (options.method == Method::Auto &&
                  url.origin().size() + get_path.size() <= options.max_get_url);

  httplib::Headers headers{{"Accept", accept.empty() ? std::string(kDefaultAccept) : accept},
                           {"User-Agent", "sparql-exemplar/0.1"}};
  const auto timeout = options.timeout;
  std::string last_error;
  for (int attempt = 0; attempt <= std::max(0, options.retries); ++attempt) {
    httplib::Client cli(url.origin());
    cli.set_url_encode(false);
    cli.set_follow_location(true);
    cli.set_connection_timeout(timeout);
    cli.set_read_timeout(timeout);
    cli.set_write_timeout(timeout);
    auto start = Clock::now();
    auto res = use_get ? cli.Get(get_path, headers)
                       : cli.Post(url.path, headers, "query=" + encoded,
                                  "application/x-www-form-urlencoded");
    auto elapsed = Clock::now() - start;
    if (res) {
      Exchange ex;
      ex.status = res->status;
      ex.content_type = res->get_header_value("Content-Type");
      ex.body = std::move(res->body);
      ex.latency = std::chrono::duration_cast<milliseconds>(elapsed);
      return ex;
    }
    if (is_timeout(res.error(), elapsed, timeout)) {
      throw ClientError(ClientError::Kind::Timeout,
                        "timed out after " + std::to_string(timeout.count()) + " ms: " + endpoint);
    }
    last_error = httplib::to_string(res.error());
  }
  throw ClientError(ClientError::Kind::Transport, "request to " + endpoint + " failed: " + last_error);
}

std::uint64_t to_count(const rdf::Term& term, std::vector<std::string>& diagnostics) {
  const auto* lit = std::get_if<rdf::Literal>(&term);
  std::uint64_t n = 0;
  if (lit != nullptr) {
    const auto& s = lit->lexical;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec == std::errc() && ptr == s.data() + s.size()) return n;
  }
  diagnostics.push_back("not a count: " + rdf::to_string(term));
  return 0;
}

std::string iri_of(const Row& row, const std::string& var) {
  auto it = row.find(var);
  if (it == row.end()) return {};
  if (const auto* iri = std::get_if<rdf::Iri>(&it->second)) return iri->value;
  return {};
}

}  // namespace

std::string Url::origin() const { return scheme + "://" + host + ":" + std::to_string(port); }

Url parse_url(std::string_view iri) {
  Url url;
  auto sep = iri.find("://");
  if (sep == std::string_view::npos) throw std::invalid_argument("not an http(s) URL: " + std::string(iri));
  url.scheme = lower(iri.substr(0, sep));
  if (url.scheme != "http" && url.scheme != "https") {
    throw std::invalid_argument("not an http(s) URL: " + std::string(iri));
  }
  auto rest = iri.substr(sep + 3);
  auto authority_end = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, authority_end);
  if (auto at = authority.rfind('@'); at != std::string_view::npos) authority = authority.substr(at + 1);
  url.port = url.scheme == "https" ? 443 : 80;
  std::string_view host = authority;
  if (!authority.empty() && authority.front() == '[') {
    auto close = authority.find(']');
    if (close == std::string_view::npos) throw std::invalid_argument("bad host in " + std::string(iri));
    host = authority.substr(0, close + 1);
    authority = authority.substr(close + 1);
    if (!authority.starts_with(":")) authority = {};
  } else if (auto colon = authority.rfind(':'); colon != std::string_view::npos) {
    host = authority.substr(0, colon);
    authority = authority.substr(colon);
  } else {
    authority = {};
  }
  if (authority.starts_with(":") && authority.size() > 1) {
    int port = 0;
    auto digits = authority.substr(1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || port <= 0 || port > 65535) {
      throw std::invalid_argument("bad port in " + std::string(iri));
    }
    url.port = port;
  }
  if (host.empty()) throw std::invalid_argument("missing host in " + std::string(iri));
  url.host = lower(host);
  std::string path = authority_end == std::string_view::npos ? "" : std::string(rest.substr(authority_end));
  if (auto hash = path.find('#'); hash != std::string::npos) path.resize(hash);
  if (path.empty() || path.front() != '/') path.insert(0, "/");
  url.path = path;
  return url;
}

std::size_t SparqlResponse::result_count() const {
  switch (kind) {
    case Kind::Bindings: return rows.size();
    case Kind::Boolean: return 1;
    case Kind::Graph: return triples.size();
  }
  return 0;
}

SparqlResponse parse_response(std::string_view body, std::string_view content_type) {
  SparqlResponse out;
  out.content_type = std::string(content_type);
  const std::string media = media_type(content_type);
  Syntax declared = declared_syntax(media);
  Syntax actual = sniff(body);
  Syntax chosen = declared;
  if (declared == Syntax::Unknown || (actual != Syntax::Unknown && actual != declared)) {
    chosen = actual;
    if (actual != Syntax::Unknown) {
      out.diagnostics.push_back("response labelled '" + (media.empty() ? std::string("(none)") : media) +
                                "' but the body is " + std::string(syntax_name(actual)));
    }
  }
  switch (chosen) {
    case Syntax::Json: parse_json_results(body, out); break;
    case Syntax::Turtle: parse_turtle_results(body, out); break;
    case Syntax::Xml:
      throw ClientError(ClientError::Kind::Parse, "XML results are not supported; request JSON", 0,
                        excerpt(body));
    case Syntax::Unknown:
      throw ClientError(ClientError::Kind::Parse,
                        "unrecognised results format (content type '" + media + "')", 0, excerpt(body));
  }
  return out;
}

SparqlResponse execute(const std::string& endpoint, const std::string& query,
                       const ExecuteOptions& options) {
  Exchange ex = send(endpoint, query, options.accept, options);
  if (ex.status < 200 || ex.status >= 300) {
    throw ClientError(ClientError::Kind::Http,
                      "HTTP " + std::to_string(ex.status) + " from " + endpoint, ex.status,
                      excerpt(ex.body));
  }
  SparqlResponse response = parse_response(ex.body, ex.content_type);
  response.http_status = ex.status;
  response.latency = ex.latency;
  return response;
}

RawResponse forward(const std::string& endpoint, const std::string& query, const std::string& accept,
                    const ExecuteOptions& options) {
  Exchange ex = send(endpoint, query, accept, options);
  return {ex.status, std::move(ex.content_type), std::move(ex.body)};
}

std::string_view to_string(TestStatus status) {
  switch (status) {
    case TestStatus::Pass: return "pass";
    case TestStatus::Empty: return "empty";
    case TestStatus::Error: return "error";
    case TestStatus::Timeout: return "timeout";
    case TestStatus::Skipped: return "skipped";
  }
  return "?";
}

EndpointTestResult test_example(const store::QueryExample& example, const std::string& target,
                                const rdf::PrefixMap& registry, const ExecuteOptions& options) {
  EndpointTestResult result;
  result.example_id = example.id;
  result.endpoint = target;
  sparql::Query ast;
  try {
    ast = sparql::parse_query(example.query_text,
                              store::parse_options_for(example, registry, sparql::Dialect::Strict));
  } catch (const sparql::SparqlError& e) {
    result.status = TestStatus::Error;
    result.detail = std::string("query does not parse: ") + e.what();
    return result;
  }
  if (ast.form == sparql::QueryForm::Ask) {
    result.sent_query = ast.prologue.injected.empty() ? example.query_text : sparql::serialize_query(ast);
  } else {
    result.sent_query = sparql::serialize_query(sparql::with_limit(ast, 1));
  }
  try {
    auto response = execute(target, result.sent_query, options);
    result.latency = response.latency;
    const bool wants_boolean = ast.form == sparql::QueryForm::Ask;
    const bool got_boolean = response.kind == SparqlResponse::Kind::Boolean;
    if (wants_boolean != got_boolean) {
      result.status = TestStatus::Error;
      result.detail = wants_boolean ? "expected a boolean answer" : "unexpected boolean answer";
      return result;
    }
    result.status = response.result_count() > 0 ? TestStatus::Pass : TestStatus::Empty;
    for (const auto& d : response.diagnostics) {
      if (!result.detail.empty()) result.detail += "; ";
      result.detail += d;
    }
  } catch (const ClientError& e) {
    result.status = e.kind() == ClientError::Kind::Timeout ? TestStatus::Timeout : TestStatus::Error;
    result.detail = e.what();
  }
  return result;
}

ProbeResult probe_endpoint(const std::string& endpoint, const ExecuteOptions& options) {
  ProbeResult probe;
  std::string ask_failure;
  try {
    auto r = execute(endpoint, std::string(kAskProbe), options);
    probe.latency = r.latency;
    if (r.kind == SparqlResponse::Kind::Boolean) {
      probe.alive = true;
      probe.detail = "ASK answered";
      return probe;
    }
    ask_failure = "ASK did not return a boolean";
  } catch (const ClientError& e) {
    ask_failure = e.what();
  }
  probe.used_fallback = true;
  try {
    auto r = execute(endpoint, std::string(kSelectProbe), options);
    probe.latency = r.latency;
    if (r.kind == SparqlResponse::Kind::Bindings) {
      probe.alive = true;
      probe.detail = "ASK failed (" + ask_failure + "); SELECT answered";
      return probe;
    }
    probe.detail = "ASK failed (" + ask_failure + "); SELECT did not return bindings";
  } catch (const ClientError& e) {
    probe.detail = "ASK failed (" + ask_failure + "); SELECT failed (" + e.what() + ")";
  }
  return probe;
}

void run_polite(const std::vector<std::string>& hosts, const std::function<void(std::size_t)>& job,
                const std::function<void(std::size_t)>& skipped, const PoliteOptions& options) {
  std::vector<std::vector<std::size_t>> groups;
  if (options.per_host_serial) {
    std::map<std::string, std::size_t> by_host;
    for (std::size_t i = 0; i < hosts.size(); ++i) {
      auto [it, fresh] = by_host.emplace(hosts[i], groups.size());
      if (fresh) groups.emplace_back();
      groups[it->second].push_back(i);
    }
  } else {
    for (std::size_t i = 0; i < hosts.size(); ++i) groups.push_back({i});
  }
  if (groups.empty()) return;

  std::atomic<std::size_t> next{0};
  std::mutex skipped_mutex;
  auto worker = [&] {
    for (std::size_t g = next++; g < groups.size(); g = next++) {
      for (std::size_t index : groups[g]) {
        if (options.stop.stop_requested()) {
          std::lock_guard lock(skipped_mutex);
          skipped(index);
          continue;
        }
        job(index);
        if (options.delay.count() > 0) std::this_thread::sleep_for(options.delay);
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(options.max_concurrency, 1, groups.size());
  std::vector<std::jthread> threads;
  for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(worker);
  worker();
}

std::map<std::string, std::vector<std::string>> federation_members(const store::Corpus& corpus) {
  std::map<std::string, std::set<std::string>> members;
  for (const auto& ex : corpus.examples) {
    try {
      auto ast = sparql::parse_query(ex.query_text, store::parse_options_for(ex, corpus.prefix_registry));
      for (const auto& endpoint : sparql::service_endpoints(ast)) {
        if (const auto* iri = std::get_if<rdf::Iri>(&endpoint)) members[iri->value].insert(ex.id);
      }
    } catch (const sparql::SparqlError&) {
    }
  }
  std::map<std::string, std::vector<std::string>> out;
  for (auto& [endpoint, ids] : members) out[endpoint].assign(ids.begin(), ids.end());
  return out;
}

namespace {

std::string host_key(const std::string& endpoint) {
  try {
    return parse_url(endpoint).host;
  } catch (const std::invalid_argument&) {
    return endpoint;
  }
}

}  // namespace

std::vector<FederationMemberResult> test_federation_members(const store::Corpus& corpus,
                                                            const PoliteOptions& polite,
                                                            const ExecuteOptions& options) {
  std::vector<FederationMemberResult> results;
  std::vector<std::string> hosts;
  for (auto& [endpoint, ids] : federation_members(corpus)) {
    FederationMemberResult r;
    r.endpoint = endpoint;
    r.used_by = ids;
    results.push_back(std::move(r));
    hosts.push_back(host_key(endpoint));
  }
  run_polite(
      hosts,
      [&](std::size_t i) {
        auto& r = results[i];
        try {
          parse_url(r.endpoint);
        } catch (const std::invalid_argument& e) {
          r.status = TestStatus::Error;
          r.probe.detail = e.what();
          return;
        }
        r.probe = probe_endpoint(r.endpoint, options);
        r.status = r.probe.alive ? TestStatus::Pass : TestStatus::Error;
      },
      [&](std::size_t i) {
        results[i].status = TestStatus::Skipped;
        results[i].probe.detail = "cancelled";
      },
      polite);
  return results;
}

std::vector<EndpointTestResult> test_examples(const store::Corpus& corpus,
                                              const ExampleTestOptions& options) {
  std::vector<std::pair<const store::QueryExample*, std::string>> pairs;
  const auto strip = [](std::string s) {
    if (s.size() > 1 && s.back() == '/') s.pop_back();
    return s;
  };
  for (const auto& ex : corpus.examples) {
    for (const auto& t : ex.targets) {
      if (options.endpoint && strip(*options.endpoint) != strip(t)) continue;
      pairs.emplace_back(&ex, t);
    }
  }
  std::vector<EndpointTestResult> results(pairs.size());
  std::vector<std::string> hosts;
  for (const auto& [ex, t] : pairs) hosts.push_back(host_key(t));
  run_polite(
      hosts,
      [&](std::size_t i) {
        results[i] = test_example(*pairs[i].first, pairs[i].second, corpus.prefix_registry,
                                  options.execute);
      },
      [&](std::size_t i) {
        results[i].example_id = pairs[i].first->id;
        results[i].endpoint = pairs[i].second;
        results[i].status = TestStatus::Skipped;
        results[i].detail = "cancelled";
      },
      options.polite);
  return results;
}

const std::string_view kVoidClassQuery = R"(PREFIX void: <http://rdfs.org/ns/void#>
SELECT ?class ?entities WHERE {
  ?partition void:class ?class .
  OPTIONAL { ?partition void:entities ?entities }
})";

const std::string_view kVoidLinkQuery = R"(PREFIX void: <http://rdfs.org/ns/void#>
PREFIX void_ext: <http://ldf.fi/void-ext#>
SELECT ?source ?property ?target ?triples WHERE {
  ?classPartition void:class ?source ;
    void:propertyPartition ?propertyPartition .
  ?propertyPartition void:property ?property .
  OPTIONAL { ?propertyPartition void:triples ?triples }
  {
    ?propertyPartition void:classPartition ?targetPartition .
    ?targetPartition void:class ?target .
  } UNION {
    ?propertyPartition void_ext:datatypePartition ?targetPartition .
    ?targetPartition void_ext:datatype ?target .
  }
})";

VoidSummary summarize_void(const std::string& endpoint, const VoidOptions& options) {
  VoidSummary summary;
  const std::string class_query =
      options.class_query.empty() ? std::string(kVoidClassQuery) : options.class_query;
  const std::string link_query =
      options.link_query.empty() ? std::string(kVoidLinkQuery) : options.link_query;

  std::map<std::string, std::uint64_t> classes;
  auto class_rows = execute(endpoint, class_query, options.execute);
  for (const auto& row : class_rows.rows) {
    std::string cls = iri_of(row, "class");
    if (cls.empty()) continue;
    std::uint64_t n = 0;
    if (auto it = row.find("entities"); it != row.end()) n = to_count(it->second, summary.diagnostics);
    auto& slot = classes[cls];
    slot = std::max(slot, n);
  }
  for (const auto& [cls, n] : classes) summary.classes.push_back({cls, n});

  std::map<std::tuple<std::string, std::string, std::string>, std::uint64_t> links;
  auto link_rows = execute(endpoint, link_query, options.execute);
  for (const auto& row : link_rows.rows) {
    std::string source = iri_of(row, "source");
    std::string property = iri_of(row, "property");
    std::string target = iri_of(row, "target");
    if (source.empty() || property.empty() || target.empty()) continue;
    std::uint64_t n = 0;
    if (auto it = row.find("triples"); it != row.end()) n = to_count(it->second, summary.diagnostics);
    auto& slot = links[{source, property, target}];
    slot = std::max(slot, n);
  }
  for (const auto& [key, n] : links) {
    summary.links.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), n});
  }
  for (auto* r : {&class_rows, &link_rows}) {
    summary.diagnostics.insert(summary.diagnostics.end(), r->diagnostics.begin(), r->diagnostics.end());
  }
  if (summary.empty()) summary.diagnostics.push_back("no VoID class partitions found at " + endpoint);
  return summary;
}

std::string VoidSummary::to_json() const {
  nlohmann::ordered_json doc;
  doc["classes"] = nlohmann::ordered_json::array();
  for (const auto& c : classes) {
    doc["classes"].push_back({{"class", c.class_iri}, {"entities", c.entity_count}});
  }
  doc["links"] = nlohmann::ordered_json::array();
  for (const auto& l : links) {
    doc["links"].push_back({{"source", l.source_class},
                            {"property", l.property},
                            {"target", l.target},
                            {"triples", l.triple_count}});
  }
  doc["diagnostics"] = diagnostics;
  return doc.dump(2) + "\n";
}

bool CheckReport::passed() const {
  return !criteria.empty() &&
         std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.passed; });
}

const CheckCriterion* CheckReport::find(std::string_view name) const {
  for (const auto& c : criteria) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string CheckReport::to_text() const {
  std::string out = "endpoint " + endpoint + "\nexamples graph " + graph_iri + "\n";
  for (const auto& c : criteria) {
    out += std::string(c.passed ? "PASS " : "FAIL ") + c.name;
    if (!c.detail.empty()) out += ": " + c.detail;
    out += "\n";
    if (!c.passed) out += "  remedy: " + c.remedy + "\n";
  }
  return out;
}

std::string CheckReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["endpoint"] = endpoint;
  doc["graph"] = graph_iri;
  doc["passed"] = passed();
  doc["criteria"] = nlohmann::ordered_json::array();
  for (const auto& c : criteria) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["passed"] = c.passed;
    j["detail"] = c.detail;
    if (!c.passed) j["remedy"] = c.remedy;
    doc["criteria"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

CheckReport check_endpoint(const std::string& endpoint, const CheckOptions& options) {
  CheckReport report;
  report.endpoint = endpoint;
  report.graph_iri = publish::examples_graph_iri(endpoint, options.graph_overrides);
  CheckCriterion graph{"examples_graph_present", false, {}, {}};
  CheckCriterion count{"examples_count>0", false, {}, {}};
  CheckCriterion voids{"void_present", false, {}, {}};
  CheckCriterion alive{"service_alive", false, {}, {}};

  auto probe = probe_endpoint(endpoint, options.execute);
  alive.passed = probe.alive;
  alive.detail = probe.detail;
  if (!probe.alive) {
    alive.remedy = "make " + endpoint + " reachable and answer SPARQL 1.1 Protocol GET and POST requests";
    for (auto* c : {&graph, &count, &voids}) {
      c->detail = "skipped: service not alive";
      c->remedy = "fix service_alive first";
    }
    report.criteria = {graph, count, voids, alive};
    return report;
  }

  const std::string g = "<" + report.graph_iri + ">";
  try {
    auto r = execute(endpoint, "ASK WHERE { GRAPH " + g + " { ?s ?p ?o } }", options.execute);
    graph.passed = r.kind == SparqlResponse::Kind::Boolean && r.boolean;
    graph.detail = graph.passed ? "graph " + g + " has statements" : "graph " + g + " is empty or absent";
  } catch (const ClientError& e) {
    graph.detail = e.what();
  }
  if (!graph.passed) {
    graph.remedy = "load the bundle from `sparql-exemplar compile --endpoint " + endpoint +
                   "` into the named graph " + g;
  }

  try {
    auto r = execute(endpoint,
                     "PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>\n"
                     "PREFIX sh: <http://www.w3.org/ns/shacl#>\nSELECT (COUNT(DISTINCT ?example) AS ?n) "
                     "WHERE { GRAPH " + g + " { ?example a ?type . ?type rdfs:subClassOf* sh:SPARQLExecutable } }",
                     options.execute);
    std::uint64_t n = 0;
    std::vector<std::string> ignored;
    if (!r.rows.empty() && r.rows.front().contains("n")) n = to_count(r.rows.front().at("n"), ignored);
    count.passed = n > 0;
    count.detail = std::to_string(n) + " examples";
  } catch (const ClientError& e) {
    count.detail = e.what();
  }
  if (!count.passed) {
    count.remedy = "the graph " + g + " holds no typed examples; reload the compiled bundle";
  }

  try {
    auto summary = summarize_void(endpoint, options.void_options);
    voids.passed = !summary.classes.empty();
    voids.detail = std::to_string(summary.classes.size()) + " classes, " +
                   std::to_string(summary.links.size()) + " links";
  } catch (const ClientError& e) {
    voids.detail = e.what();
  }
  if (!voids.passed) {
    voids.remedy = "generate a VoID description with class partitions (void:class, void:entities) "
                   "and load it into the endpoint";
  }
  report.criteria = {graph, count, voids, alive};
  return report;
}

}  // namespace exemplar::client
