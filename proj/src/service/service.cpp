#include "exemplar/service/service.hpp"

#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <json.hpp>
#include <map>
#include <mutex>

#include "exemplar/publish/publish.hpp"

namespace exemplar::service {

using Clock = std::chrono::steady_clock;

namespace {

constexpr std::string_view kIndexPage = R"(<!doctype html>
<html>
<head><meta charset="utf-8"><title>sparql-exemplar</title></head>
<body>
<h1>sparql-exemplar</h1>
<ul>
<li><code>GET /api/examples?target=IRI</code></li>
<li><code>GET /api/search?q=TEXT&amp;fields=question,query,keywords</code></li>
<li><code>GET /api/autocomplete?endpoint=IRI</code></li>
<li><code>GET /api/check?endpoint=IRI</code></li>
<li><code>POST /api/proxy?endpoint=IRI</code></li>
</ul>
</body>
</html>
)";

std::string error_json(const std::string& message, int upstream_status = 0) {
  nlohmann::ordered_json j;
  j["error"] = message;
  if (upstream_status != 0) j["upstreamStatus"] = upstream_status;
  return j.dump() + "\n";
}

void fail(httplib::Response& res, int status, const std::string& message, int upstream_status = 0) {
  res.status = status;
  res.set_content(error_json(message, upstream_status), "application/json");
}

bool is_http(const std::string& iri) {
  try {
    client::parse_url(iri);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

std::string strip_slash(std::string s) {
  if (s.size() > 1 && s.back() == '/') s.pop_back();
  return s;
}

std::string env(const char* name) {
  const char* v = std::getenv(name);
  return v == nullptr ? std::string() : std::string(v);
}

}  // namespace

ServiceConfig config_from_env(ServiceConfig base) {
  if (auto v = env("SPARQL_EXEMPLAR_BIND"); !v.empty()) base.bind_address = v;
  if (auto v = env("SPARQL_EXEMPLAR_PORT"); !v.empty()) base.port = std::stoi(v);
  if (auto v = env("SPARQL_EXEMPLAR_PROXY_ALLOW"); !v.empty()) {
    base.proxy_allow_list.clear();
    std::size_t start = 0;
    while (start <= v.size()) {
      auto comma = v.find(',', start);
      std::string host = v.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!host.empty()) base.proxy_allow_list.insert(host);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (auto v = env("SPARQL_EXEMPLAR_AUTOCOMPLETE_TTL"); !v.empty()) {
    base.autocomplete_ttl = std::chrono::seconds(std::stoll(v));
  }
  if (auto v = env("SPARQL_EXEMPLAR_STATIC_DIR"); !v.empty()) base.static_dir = v;
  if (auto v = env("SPARQL_EXEMPLAR_TIMEOUT_MS"); !v.empty()) {
    base.execute.timeout = std::chrono::milliseconds(std::stoll(v));
  }
  return base;
}

struct Service::Impl {
  store::Corpus corpus;
  ServiceConfig config;
  httplib::Server server;
  std::set<std::string> allow;

  struct CacheEntry {
    std::string body;
    Clock::time_point expires;
  };
  std::mutex cache_mutex;
  std::map<std::string, CacheEntry> cache;
  std::atomic<std::size_t> fetches{0};

  Impl(store::Corpus c, ServiceConfig cfg) : corpus(std::move(c)), config(std::move(cfg)) {
    allow = config.proxy_allow_list;
    if (allow.empty()) {
      for (const auto& ex : corpus.examples) {
        for (const auto& t : ex.targets) {
          try {
            allow.insert(client::parse_url(t).host);
          } catch (const std::invalid_argument&) {
          }
        }
      }
    }
    routes();
  }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type, Accept"}});
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Get("/api/examples", [this](const httplib::Request& req, httplib::Response& res) {
      std::vector<store::QueryExample> selected;
      const std::string target = req.get_param_value("target");
      for (const auto& ex : corpus.examples) {
        if (target.empty() || std::any_of(ex.targets.begin(), ex.targets.end(), [&](const auto& t) {
              return strip_slash(t) == strip_slash(target);
            })) {
          selected.push_back(ex);
        }
      }
      res.set_content(publish::emit_json(selected), "application/json");
    });

    server.Get("/api/search", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string q = req.get_param_value("q");
      if (q.empty()) return fail(res, 400, "missing q");
      std::set<store::SearchField> fields;
      std::string spec = req.has_param("fields") ? req.get_param_value("fields") : "question";
      std::size_t start = 0;
      while (start <= spec.size()) {
        auto comma = spec.find(',', start);
        std::string name = spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!name.empty()) {
          auto f = store::parse_search_field(name);
          if (!f) return fail(res, 400, "unknown search field: " + name);
          fields.insert(*f);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (fields.empty()) return fail(res, 400, "no search fields");
      res.set_content(publish::emit_json(store::search(corpus, q, fields)), "application/json");
    });

    server.Get("/api/autocomplete", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string endpoint = req.get_param_value("endpoint");
      if (!is_http(endpoint)) return fail(res, 400, "endpoint must be an http(s) IRI");
      {
        std::lock_guard lock(cache_mutex);
        auto it = cache.find(endpoint);
        if (it != cache.end() && it->second.expires > Clock::now()) {
          res.set_content(it->second.body, "application/json");
          return;
        }
      }
      std::string body;
      try {
        ++fetches;
        body = client::summarize_void(endpoint, void_options()).to_json();
      } catch (const client::ClientError& e) {
        return fail(res, 502, e.what(), e.http_status());
      }
      {
        std::lock_guard lock(cache_mutex);
        auto now = Clock::now();
        std::erase_if(cache, [&](const auto& kv) { return kv.second.expires <= now; });
        while (!cache.empty() && cache.size() >= std::max<std::size_t>(1, config.autocomplete_capacity)) {
          auto oldest = std::min_element(cache.begin(), cache.end(), [](const auto& a, const auto& b) {
            return a.second.expires < b.second.expires;
          });
          cache.erase(oldest);
        }
        cache[endpoint] = {body, now + config.autocomplete_ttl};
      }
      res.set_content(body, "application/json");
    });

    server.Get("/api/check", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string endpoint = req.get_param_value("endpoint");
      if (!is_http(endpoint)) return fail(res, 400, "endpoint must be an http(s) IRI");
      client::CheckOptions options;
      options.execute = config.execute;
      options.void_options = void_options();
      res.set_content(client::check_endpoint(endpoint, options).to_json(), "application/json");
    });

    server.Post("/api/proxy", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string endpoint = req.get_param_value("endpoint");
      client::Url url;
      try {
        url = client::parse_url(endpoint);
      } catch (const std::invalid_argument&) {
        return fail(res, 400, "endpoint must be an http(s) IRI");
      }
      if (!allow.contains(url.host)) return fail(res, 403, "endpoint host not allow-listed: " + url.host);
      std::string query = req.has_param("query") ? req.get_param_value("query") : std::string();
      if (query.empty() && !req.get_header_value("Content-Type").starts_with("application/x-www-form")) {
        query = req.body;
      }
      if (query.empty()) return fail(res, 400, "missing query");
      try {
        auto upstream = client::forward(endpoint, query, req.get_header_value("Accept"), config.execute);
        if (upstream.status >= 400) {
          return fail(res, 502, "upstream returned HTTP " + std::to_string(upstream.status), upstream.status);
        }
        res.status = upstream.status;
        res.set_content(upstream.body, upstream.content_type.empty() ? "application/octet-stream"
                                                                     : upstream.content_type);
      } catch (const client::ClientError& e) {
        fail(res, 502, e.what());
      }
    });

    if (!config.static_dir.empty()) {
      server.set_mount_point("/", config.static_dir.string());
    } else {
      server.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(std::string(kIndexPage), "text/html; charset=utf-8");
      });
    }
  }

  client::VoidOptions void_options() const {
    client::VoidOptions v = config.void_options;
    v.execute = config.execute;
    return v;
  }
};

Service::Service(store::Corpus corpus, ServiceConfig config)
    : impl_(std::make_unique<Impl>(std::move(corpus), std::move(config))) {}

Service::~Service() { stop(); }

int Service::bind() {
  if (impl_->config.port == 0) return impl_->server.bind_to_any_port(impl_->config.bind_address);
  return impl_->server.bind_to_port(impl_->config.bind_address, impl_->config.port) ? impl_->config.port
                                                                                    : -1;
}

bool Service::listen() { return impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

const std::set<std::string>& Service::proxy_allow_list() const { return impl_->allow; }

std::size_t Service::autocomplete_fetches() const { return impl_->fetches.load(); }

}  // namespace exemplar::service
