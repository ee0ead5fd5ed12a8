#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <set>
#include <string>

#include "exemplar/client/sparql_client.hpp"
#include "exemplar/store/example.hpp"

namespace httplib {
class Server;
}

namespace exemplar::service {

struct ServiceConfig {
  std::string bind_address = "127.0.0.1";
  int port = 8080;  // 0: any free port
  /// Hosts the proxy may contact. Empty: the hosts of every corpus target.
  std::set<std::string> proxy_allow_list;
  std::chrono::seconds autocomplete_ttl{3600};
  std::size_t autocomplete_capacity = 64;
  /// Served under `/`. Empty: a small built-in index page.
  std::filesystem::path static_dir;
  client::ExecuteOptions execute;
  client::VoidOptions void_options;
};

/// Reads SPARQL_EXEMPLAR_BIND, SPARQL_EXEMPLAR_PORT,
/// SPARQL_EXEMPLAR_PROXY_ALLOW (comma separated hosts),
/// SPARQL_EXEMPLAR_AUTOCOMPLETE_TTL (seconds), SPARQL_EXEMPLAR_STATIC_DIR
/// and SPARQL_EXEMPLAR_TIMEOUT_MS over `base`.
ServiceConfig config_from_env(ServiceConfig base = {});

/// HTTP API over a loaded corpus:
///   GET  /api/examples?target=IRI
///   GET  /api/search?q=TEXT&fields=question,query,keywords
///   GET  /api/autocomplete?endpoint=IRI   (VoID summary, cached)
///   GET  /api/check?endpoint=IRI
///   POST /api/proxy?endpoint=IRI          (body: query, raw or form encoded)
/// Every response carries permissive CORS headers.
class Service {
 public:
  Service(store::Corpus corpus, ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the configured address; returns the bound port or -1.
  int bind();
  /// Blocks until stop().
  bool listen();
  void stop();
  void wait_until_ready() const;

  const std::set<std::string>& proxy_allow_list() const;
  /// Upstream VoID requests made by /api/autocomplete (cache misses).
  std::size_t autocomplete_fetches() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace exemplar::service
