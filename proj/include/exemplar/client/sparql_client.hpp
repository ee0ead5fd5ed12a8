#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "exemplar/rdf/term.hpp"
#include "exemplar/store/example.hpp"

namespace exemplar::client {

struct Url {
  std::string scheme;  // http or https
  std::string host;    // lower-cased
  int port = 0;
  std::string path;    // path plus query string, at least "/"

  std::string origin() const;  // scheme://host:port
};

/// Throws std::invalid_argument unless `iri` is an http(s) URL.
Url parse_url(std::string_view iri);

class ClientError : public std::runtime_error {
 public:
  enum class Kind { Transport, Timeout, Http, Parse };

  ClientError(Kind kind, const std::string& message, int status = 0, std::string body = {})
      : std::runtime_error(message), kind_(kind), status_(status), body_(std::move(body)) {}

  Kind kind() const { return kind_; }
  int http_status() const { return status_; }
  /// First bytes of the response body, for diagnostics.
  const std::string& body_excerpt() const { return body_; }

 private:
  Kind kind_;
  int status_;
  std::string body_;
};

using Row = std::map<std::string, rdf::Term>;

struct SparqlResponse {
  enum class Kind { Bindings, Boolean, Graph };

  Kind kind = Kind::Bindings;
  std::vector<std::string> variables;
  std::vector<Row> rows;
  bool boolean = false;
  std::vector<rdf::Triple> triples;
  int http_status = 0;
  std::string content_type;
  std::chrono::milliseconds latency{0};
  /// Notes about the exchange, e.g. a JSON body labelled text/plain.
  std::vector<std::string> diagnostics;

  /// Rows, triples, or 1 for a boolean answer.
  std::size_t result_count() const;
};

enum class Method { Auto, Get, Post };

struct ExecuteOptions {
  std::chrono::milliseconds timeout{30000};
  Method method = Method::Auto;
  std::string accept;  // empty: the default weighted list
  int retries = 1;     // transport failures only
  std::size_t max_get_url = 2000;
};

inline constexpr std::string_view kDefaultAccept =
    "application/sparql-results+json, text/turtle;q=0.9, application/json;q=0.8, */*;q=0.1";

/// Parses a SPARQL results body. The declared content type is trusted when
/// it names JSON or Turtle and the body agrees; otherwise the first
/// non-blank byte decides and the mismatch is noted in `diagnostics`.
SparqlResponse parse_response(std::string_view body, std::string_view content_type);

/// One SPARQL 1.1 Protocol request. GET for short queries, form POST
/// otherwise (Method::Auto). Throws ClientError.
SparqlResponse execute(const std::string& endpoint, const std::string& query,
                       const ExecuteOptions& options = {});

/// Raw exchange used by the HTTP proxy: body and content type are returned
/// verbatim. Throws ClientError for transport failures only.
struct RawResponse {
  int status = 0;
  std::string content_type;
  std::string body;
};
RawResponse forward(const std::string& endpoint, const std::string& query, const std::string& accept,
                    const ExecuteOptions& options = {});

enum class TestStatus { Pass, Empty, Error, Timeout, Skipped };

std::string_view to_string(TestStatus status);

struct EndpointTestResult {
  std::string example_id;
  std::string endpoint;
  TestStatus status = TestStatus::Skipped;
  std::string detail;
  std::chrono::milliseconds latency{0};
  std::string sent_query;
};

/// Runs the example against `target`: SELECT, DESCRIBE and CONSTRUCT with a
/// top-level LIMIT 1, ASK unchanged.
EndpointTestResult test_example(const store::QueryExample& example, const std::string& target,
                                const rdf::PrefixMap& registry = {},
                                const ExecuteOptions& options = {});

struct ProbeResult {
  bool alive = false;
  bool used_fallback = false;
  std::string detail;
  std::chrono::milliseconds latency{0};
};

inline constexpr std::string_view kAskProbe = "ASK WHERE { }";
inline constexpr std::string_view kSelectProbe = "SELECT * WHERE { ?s ?p ?o } LIMIT 1";

/// `ASK WHERE { }`, then `SELECT * WHERE { ?s ?p ?o } LIMIT 1` if that fails.
ProbeResult probe_endpoint(const std::string& endpoint, const ExecuteOptions& options = {});

/// Politeness contract for batches of requests.
struct PoliteOptions {
  std::size_t max_concurrency = 4;
  bool per_host_serial = true;
  std::chrono::milliseconds delay{0};  // after each request, per worker
  std::stop_token stop;
};

/// Runs `job(i)` for every index, at most `max_concurrency` at a time and,
/// with per_host_serial, never two for the same host at once. Indexes not
/// started before a stop request are passed to `skipped`.
void run_polite(const std::vector<std::string>& hosts, const std::function<void(std::size_t)>& job,
                const std::function<void(std::size_t)>& skipped, const PoliteOptions& options);

struct FederationMemberResult {
  std::string endpoint;
  std::vector<std::string> used_by;  // example ids, sorted
  TestStatus status = TestStatus::Skipped;
  ProbeResult probe;
};

/// Distinct SERVICE IRIs across the corpus (by IRI string), sorted.
std::map<std::string, std::vector<std::string>> federation_members(const store::Corpus& corpus);

std::vector<FederationMemberResult> test_federation_members(const store::Corpus& corpus,
                                                            const PoliteOptions& polite = {},
                                                            const ExecuteOptions& options = {});

struct ExampleTestOptions {
  std::optional<std::string> endpoint;  // only this target
  PoliteOptions polite;
  ExecuteOptions execute;
};

/// test_example for every (example, target) pair, in corpus order.
std::vector<EndpointTestResult> test_examples(const store::Corpus& corpus,
                                              const ExampleTestOptions& options = {});

struct VoidClass {
  std::string class_iri;
  std::uint64_t entity_count = 0;
  friend bool operator==(const VoidClass&, const VoidClass&) = default;
};

struct VoidLink {
  std::string source_class;
  std::string property;
  std::string target;  // class or datatype IRI
  std::uint64_t triple_count = 0;
  friend bool operator==(const VoidLink&, const VoidLink&) = default;
};

struct VoidSummary {
  std::vector<VoidClass> classes;
  std::vector<VoidLink> links;
  std::vector<std::string> diagnostics;

  bool empty() const { return classes.empty() && links.empty(); }
  std::string to_json() const;
};

struct VoidOptions {
  std::string class_query;  // empty: kVoidClassQuery
  std::string link_query;   // empty: kVoidLinkQuery
  ExecuteOptions execute;
};

/// Class partitions: binds ?class and ?entities.
extern const std::string_view kVoidClassQuery;
/// Class-to-class/datatype links: binds ?source ?property ?target ?triples.
extern const std::string_view kVoidLinkQuery;

/// Throws ClientError for transport and HTTP failures. An endpoint without
/// VoID yields an empty summary with a diagnostic.
VoidSummary summarize_void(const std::string& endpoint, const VoidOptions& options = {});

struct CheckCriterion {
  std::string name;
  bool passed = false;
  std::string remedy;  // non-empty when failed
  std::string detail;
};

struct CheckReport {
  std::string endpoint;
  std::string graph_iri;
  std::vector<CheckCriterion> criteria;

  bool passed() const;
  const CheckCriterion* find(std::string_view name) const;
  std::string to_text() const;
  std::string to_json() const;
};

struct CheckOptions {
  VoidOptions void_options;
  ExecuteOptions execute;
  std::map<std::string, std::string> graph_overrides;
};

/// Criteria, in order: examples_graph_present, examples_count>0,
/// void_present, service_alive. A dead endpoint fails all four.
CheckReport check_endpoint(const std::string& endpoint, const CheckOptions& options = {});

}  // namespace exemplar::client
