#include "mock_endpoint.hpp"

#include <httplib.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <json.hpp>

#include "exemplar/sparql/parser.hpp"

namespace exemplar::testing {

using Clock = std::chrono::steady_clock;

MockEndpoint::MockEndpoint(Handler handler)
    : server_(std::make_unique<httplib::Server>()), handler_(std::move(handler)) {
  auto serve = [this](const httplib::Request& req, httplib::Response& res) {
    RecordedRequest rec;
    rec.method = req.method;
    rec.path = req.path;
    rec.query = req.get_param_value("query");
    if (rec.query.empty() && req.get_header_value("Content-Type").starts_with("application/sparql-query")) {
      rec.query = req.body;
    }
    rec.accept = req.get_header_value("Accept");
    rec.content_type = req.get_header_value("Content-Type");
    rec.start = Clock::now();
    Handler handler;
    {
      std::lock_guard lock(mutex_);
      ++in_flight_;
      max_in_flight_ = std::max(max_in_flight_, in_flight_);
      handler = handler_;
    }
    MockReply reply = handler(rec);
    if (reply.delay.count() > 0) std::this_thread::sleep_for(reply.delay);
    rec.end = Clock::now();
    {
      std::lock_guard lock(mutex_);
      --in_flight_;
      requests_.push_back(rec);
    }
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
  };
  server_->Get(".*", serve);
  server_->Post(".*", serve);
  port_ = server_->bind_to_any_port("127.0.0.1");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

MockEndpoint::~MockEndpoint() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string MockEndpoint::url(const std::string& path) const {
  return "http://127.0.0.1:" + std::to_string(port_) + path;
}

std::string MockEndpoint::localhost_url(const std::string& path) const {
  return "http://localhost:" + std::to_string(port_) + path;
}

std::vector<RecordedRequest> MockEndpoint::requests() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

std::size_t MockEndpoint::request_count() const {
  std::lock_guard lock(mutex_);
  return requests_.size();
}

std::size_t MockEndpoint::max_in_flight() const {
  std::lock_guard lock(mutex_);
  return max_in_flight_;
}

void MockEndpoint::set_handler(Handler handler) {
  std::lock_guard lock(mutex_);
  handler_ = std::move(handler);
}

std::string dead_endpoint_url() {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  return "http://127.0.0.1:" + std::to_string(ntohs(addr.sin_port)) + "/sparql";
}

MockReply boolean_reply(bool value) {
  MockReply r;
  r.body = nlohmann::json{{"head", nlohmann::json::object()}, {"boolean", value}}.dump();
  return r;
}

MockReply bindings_reply(const std::vector<std::string>& vars,
                         const std::vector<std::map<std::string, std::string>>& rows) {
  nlohmann::json doc;
  doc["head"]["vars"] = vars;
  doc["results"]["bindings"] = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json b = nlohmann::json::object();
    for (const auto& [var, value] : row) {
      if (value.starts_with("http://") || value.starts_with("https://")) {
        b[var] = {{"type", "uri"}, {"value", value}};
      } else if (!value.empty() && value.find_first_not_of("0123456789") == std::string::npos) {
        b[var] = {{"type", "literal"},
                  {"datatype", "http://www.w3.org/2001/XMLSchema#integer"},
                  {"value", value}};
      } else {
        b[var] = {{"type", "literal"}, {"value", value}};
      }
    }
    doc["results"]["bindings"].push_back(b);
  }
  MockReply r;
  r.body = doc.dump();
  return r;
}

namespace {

bool has(const std::string& haystack, std::string_view needle) {
  return haystack.find(needle) != std::string::npos;
}

MockReply generic_reply(const std::string& query) {
  try {
    auto ast = sparql::parse_query(query, sparql::Dialect::Extended);
    switch (ast.form) {
      case sparql::QueryForm::Ask: return boolean_reply(true);
      case sparql::QueryForm::Select: return bindings_reply({"x"}, {{{"x", "http://example.org/x"}}});
      case sparql::QueryForm::Construct:
      case sparql::QueryForm::Describe: {
        MockReply r;
        r.content_type = "text/turtle";
        r.body = "<http://example.org/s> <http://example.org/p> <http://example.org/o> .\n";
        return r;
      }
    }
  } catch (const sparql::SparqlError& e) {
    return {400, "text/plain", std::string("parse error: ") + e.what(), {}};
  }
  return {500, "text/plain", "unreachable", {}};
}

}  // namespace

MockEndpoint::Handler personality_handler(Personality p) {
  return [p](const RecordedRequest& req) -> MockReply {
    const std::string& q = req.query;
    if (q == client::kAskProbe) {
      if (!p.ask_supported) return {400, "text/plain", "ASK not supported", {}};
      return boolean_reply(true);
    }
    if (q == client::kSelectProbe) {
      return bindings_reply({"s", "p", "o"}, {{{"s", "http://example.org/s"},
                                               {"p", "http://example.org/p"},
                                               {"o", "http://example.org/o"}}});
    }
    if (has(q, "ASK WHERE { GRAPH <")) {
      return boolean_reply(!p.examples_graph.empty() && has(q, "<" + p.examples_graph + ">"));
    }
    if (has(q, "COUNT(DISTINCT ?example)")) {
      std::size_t n = !p.examples_graph.empty() && has(q, "<" + p.examples_graph + ">") ? p.example_count : 0;
      return bindings_reply({"n"}, {{{"n", std::to_string(n)}}});
    }
    if (has(q, "void:propertyPartition")) {
      std::vector<std::map<std::string, std::string>> rows;
      for (const auto& l : p.links) {
        rows.push_back({{"source", l.source_class},
                        {"property", l.property},
                        {"target", l.target},
                        {"triples", std::to_string(l.triple_count)}});
      }
      return bindings_reply({"source", "property", "target", "triples"}, rows);
    }
    if (has(q, "void:class")) {
      std::vector<std::map<std::string, std::string>> rows;
      for (const auto& c : p.classes) {
        rows.push_back({{"class", c.class_iri}, {"entities", std::to_string(c.entity_count)}});
      }
      return bindings_reply({"class", "entities"}, rows);
    }
    return generic_reply(q);
  };
}

}  // namespace exemplar::testing
