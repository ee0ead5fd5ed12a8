#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "exemplar/client/sparql_client.hpp"
#include "exemplar/fixer/fix.hpp"
#include "exemplar/publish/publish.hpp"
#include "exemplar/rdf/turtle.hpp"
#include "exemplar/service/service.hpp"
#include "exemplar/store/example.hpp"
#include "exemplar/validation/validate.hpp"

namespace exemplar::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

rdf::PrefixMap sibling_prefixes(const fs::path& file) {
  fs::path candidate = file.parent_path() / "prefixes.ttl";
  if (!fs::is_regular_file(candidate)) return {};
  return store::read_prefix_declarations(rdf::parse_turtle(read_file(candidate)).triples);
}

/// A corpus root, or a single example file treated as a one-example corpus.
store::Corpus load_input(const fs::path& path) {
  if (fs::is_directory(path)) return store::load_corpus(path);
  if (!fs::is_regular_file(path)) throw std::runtime_error("no such file or directory: " + path.string());
  auto prefixes = sibling_prefixes(path);
  try {
    auto ex = store::load_example_file(path, prefixes);
    ex.source_path = path.filename().string();
    auto corpus = store::make_corpus({ex}, prefixes);
    corpus.root = path.parent_path();
    return corpus;
  } catch (const store::LoadError& e) {
    auto corpus = store::make_corpus({}, prefixes);
    corpus.root = path.parent_path();
    store::LoadIssue issue;
    issue.path = path.filename().string();
    issue.kind = e.kind();
    issue.message = e.what();
    issue.line = e.line();
    corpus.issues.push_back(issue);
    return corpus;
  }
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(s);
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::string fmt_ms(std::chrono::milliseconds ms) { return std::to_string(ms.count()) + "ms"; }

void require_network(bool endpoint_given, bool remote) {
  if (!endpoint_given && !remote) {
    throw UsageError("this command contacts SPARQL endpoints; pass --endpoint or --remote");
  }
}

int cmd_validate(const fs::path& root, bool json, std::ostream& out) {
  auto corpus = load_input(root);
  auto report = validation::validate_corpus(corpus);
  out << (json ? report.to_json() : report.to_text());
  return report.passed() ? kExitOk : kExitFailure;
}

struct FixTarget {
  fs::path file;
  std::string id;  // empty for a bare query file
  std::string query;
  rdf::PrefixMap registry;
};

std::string rewrite_turtle(const std::string& text, const std::string& id, const std::string& query) {
  auto doc = rdf::parse_turtle(text);
  for (auto& t : doc.triples) {
    const auto* s = std::get_if<rdf::Iri>(&t.subject);
    if (s == nullptr || s->value != id) continue;
    const std::string& p = t.predicate.value;
    if (p == store::vocab::kSelect || p == store::vocab::kAsk || p == store::vocab::kConstruct ||
        p == store::vocab::kDescribe) {
      t.object = rdf::Literal::plain(query);
    }
  }
  return rdf::serialize_turtle(doc.triples, doc.prefixes);
}

int cmd_fix(const fs::path& input, bool write, const std::vector<std::string>& hint_ns, std::ostream& out,
            std::ostream& err) {
  std::vector<FixTarget> targets;
  const bool bare_query = fs::is_regular_file(input) && input.extension() != ".ttl";
  if (bare_query) {
    targets.push_back({input, "", read_file(input), sibling_prefixes(input)});
  } else {
    auto corpus = load_input(input);
    const fs::path base = fs::is_directory(input) ? input : input.parent_path();
    for (const auto& ex : corpus.examples) {
      rdf::PrefixMap registry = ex.prefix_decls;
      registry.merge_missing(corpus.prefix_registry);
      targets.push_back({base / ex.source_path, ex.id, ex.query_text, std::move(registry)});
    }
    for (const auto& issue : corpus.issues) err << issue.path << ": " << issue.message << "\n";
  }
  const auto namespaces = hint_ns.empty() ? fixer::default_hint_namespaces() : hint_ns;
  std::size_t changed = 0, failed = 0;
  for (const auto& t : targets) {
    const std::string label = t.id.empty() ? t.file.string() : t.id;
    try {
      auto [fixed, report] = fixer::fix_all(t.query, t.registry, namespaces);
      for (const auto& w : report.warnings) err << label << ": warning: " << w << "\n";
      if (!report.changed()) continue;
      ++changed;
      out << "--- " << label << "\n+++ " << label << " (fixed)\n";
      for (const auto& a : report.applied) {
        out << "# " << fixer::to_string(a.fix) << ": " << a.detail << "\n";
      }
      out << line_diff(t.query, fixed);
      if (write) {
        write_file(t.file, t.id.empty() ? fixed : rewrite_turtle(read_file(t.file), t.id, fixed));
      }
    } catch (const fixer::FixError& e) {
      ++failed;
      err << label << ": error: " << e.what() << "\n";
    }
  }
  out << changed << " of " << targets.size() << " queries " << (write ? "fixed" : "need fixes");
  if (failed > 0) out << ", " << failed << " could not be fixed";
  out << "\n";
  return failed > 0 ? kExitFailure : kExitOk;
}

int cmd_stats(const fs::path& root, bool json, std::ostream& out) {
  auto corpus = load_input(root);
  auto s = store::stats(corpus);
  if (json) {
    nlohmann::ordered_json doc;
    auto row = [](const store::ProjectStats& p) {
      return nlohmann::ordered_json{{"project", p.project},
                                    {"examples", p.example_count},
                                    {"parsed", p.parsed_count},
                                    {"federated", p.federated_count},
                                    {"triplePatterns", p.triple_patterns},
                                    {"meanTriplePatterns", p.mean_triple_patterns}};
    };
    doc["projects"] = nlohmann::ordered_json::array();
    for (const auto& p : s.projects) doc["projects"].push_back(row(p));
    doc["total"] = row(s.total);
    doc["unparsed"] = nlohmann::ordered_json::array();
    for (const auto& u : s.unparsed) {
      doc["unparsed"].push_back({{"id", u.example_id}, {"file", u.source_path}, {"error", u.error}});
    }
    out << doc.dump(2) << "\n";
    return kExitOk;
  }
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %9s %7s %10s %6s %9s\n", "project", "examples", "parsed",
                "federated", "tps", "mean_tps");
  out << line;
  auto print = [&](const store::ProjectStats& p) {
    std::snprintf(line, sizeof line, "%-24s %9zu %7zu %10zu %6zu %9.1f\n", p.project.c_str(),
                  p.example_count, p.parsed_count, p.federated_count, p.triple_patterns,
                  p.mean_triple_patterns);
    out << line;
  };
  for (const auto& p : s.projects) print(p);
  print(s.total);
  for (const auto& u : s.unparsed) {
    out << "unparsed " << u.example_id << " (" << u.source_path << "): " << u.error << "\n";
  }
  return kExitOk;
}

std::set<store::SearchField> parse_fields(const std::vector<std::string>& names) {
  std::set<store::SearchField> fields;
  for (const auto& joined : names) {
    std::size_t start = 0;
    while (start <= joined.size()) {
      auto comma = joined.find(',', start);
      std::string name = joined.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!name.empty()) {
        auto f = store::parse_search_field(name);
        if (!f) throw UsageError("unknown search field: " + name + " (question, query, keywords)");
        fields.insert(*f);
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (fields.empty()) fields.insert(store::SearchField::Question);
  return fields;
}

}  // namespace

std::string line_diff(const std::string& before, const std::string& after) {
  auto a = split_lines(before);
  auto b = split_lines(after);
  std::vector<std::vector<std::size_t>> lcs(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = a.size(); i-- > 0;) {
    for (std::size_t j = b.size(); j-- > 0;) {
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }
  std::string out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (i < a.size() && j < b.size() && a[i] == b[j]) {
      out += " " + a[i++] + "\n";
      ++j;
    } else if (j < b.size() && (i == a.size() || lcs[i][j + 1] >= lcs[i + 1][j])) {
      out += "+" + b[j++] + "\n";
    } else {
      out += "-" + a[i++] + "\n";
    }
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maintain, test and publish collections of SPARQL query examples.", "sparql-exemplar"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::string root, file_out, endpoint, query_text;
  std::vector<std::string> fields, hint_ns;
  bool json = false, write = false, renumber = false, trig = false, remote = false, allow_empty = false;
  std::size_t concurrency = 4;
  long long delay_ms = 0, timeout_ms = 30000;

  auto add_timeout = [&](CLI::App* sub) {
    sub->add_option("--timeout-ms", timeout_ms, "Per-request timeout")
        ->envname("SPARQL_EXEMPLAR_TIMEOUT_MS")
        ->capture_default_str();
  };

  auto* validate = app.add_subcommand("validate", "Run the metadata rules; exit 0 iff no errors");
  validate->add_option("root", root, "Corpus root or example file")->required();
  validate->add_flag("--json", json, "JSON report");

  auto* fix = app.add_subcommand("fix", "Apply automated fixes; prints diffs unless --write");
  fix->add_option("root", root, "Corpus root, example file or query file")->required();
  fix->add_flag("--write", write, "Rewrite files in place");
  fix->add_option("--hints-ns", hint_ns, "Query-hint namespace IRIs to strip");

  auto* viz = app.add_subcommand("viz", "Write the Markdown site with Mermaid diagrams");
  viz->add_option("root", root, "Corpus root")->required();
  viz->add_option("--out", file_out, "Output directory")->required();

  auto* compile = app.add_subcommand("compile", "Compile the examples of one endpoint to RDF");
  compile->add_option("root", root, "Corpus root")->required();
  compile->add_option("--endpoint", endpoint, "Target endpoint IRI")->required();
  compile->add_option("--out", file_out, "Output file")->required();
  compile->add_flag("--renumber", renumber, "Subjects <graph>/1, <graph>/2, ...");
  compile->add_flag("--trig", trig, "Wrap statements in the examples graph (TriG)");

  auto* export_json = app.add_subcommand("export-json", "Export examples as JSON");
  export_json->add_option("root", root, "Corpus root")->required();
  export_json->add_option("--out", file_out, "Output file")->required();

  auto* test_queries = app.add_subcommand("test-queries", "Run every example against its targets");
  test_queries->add_option("root", root, "Corpus root")->required();
  test_queries->add_option("--endpoint", endpoint, "Only this target");
  test_queries->add_flag("--remote", remote, "Contact every target");
  test_queries->add_option("--concurrency", concurrency, "Maximum parallel requests")
      ->envname("SPARQL_EXEMPLAR_CONCURRENCY")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  test_queries->add_option("--delay", delay_ms, "Pause after each request, in ms")->check(CLI::NonNegativeNumber);
  test_queries->add_flag("--allow-empty", allow_empty, "Do not fail on empty results");
  test_queries->add_flag("--json", json, "JSON output");
  add_timeout(test_queries);

  auto* test_federation = app.add_subcommand("test-federation", "Probe every SERVICE endpoint");
  test_federation->add_option("root", root, "Corpus root")->required();
  test_federation->add_flag("--remote", remote, "Required: confirms network access");
  test_federation->add_option("--concurrency", concurrency, "Maximum parallel requests")
      ->envname("SPARQL_EXEMPLAR_CONCURRENCY")
      ->check(CLI::PositiveNumber);
  test_federation->add_option("--delay", delay_ms, "Pause after each request, in ms")->check(CLI::NonNegativeNumber);
  test_federation->add_flag("--json", json, "JSON output");
  add_timeout(test_federation);

  auto* check = app.add_subcommand("check", "Check an endpoint's example and VoID metadata");
  check->add_option("--endpoint", endpoint, "Endpoint IRI")->required();
  check->add_flag("--json", json, "JSON output");
  add_timeout(check);

  auto* search = app.add_subcommand("search", "Substring search over the examples");
  search->add_option("root", root, "Corpus root")->required();
  search->add_option("--q", query_text, "Case-sensitive substring")->required();
  search->add_option("--fields", fields, "question, query, keywords (comma separated)");
  search->add_flag("--json", json, "JSON output");

  auto* stats = app.add_subcommand("stats", "Examples and triple patterns per project");
  stats->add_option("root", root, "Corpus root")->required();
  stats->add_flag("--json", json, "JSON output");

  service::ServiceConfig serve_config;
  std::vector<std::string> allow;
  long long ttl_s = 3600;
  std::string static_dir;
  auto* serve = app.add_subcommand("serve", "HTTP API for the example editor");
  serve->add_option("--root", root, "Corpus root")->required();
  serve->add_option("--bind", serve_config.bind_address, "Address to bind")
      ->envname("SPARQL_EXEMPLAR_BIND")
      ->capture_default_str();
  serve->add_option("--port", serve_config.port, "Port (0: any free port)")
      ->envname("SPARQL_EXEMPLAR_PORT")
      ->capture_default_str();
  serve->add_option("--proxy-allow", allow, "Hosts the proxy may contact (default: corpus targets)")
      ->envname("SPARQL_EXEMPLAR_PROXY_ALLOW")
      ->delimiter(',');
  serve->add_option("--autocomplete-ttl", ttl_s, "VoID cache lifetime in seconds")
      ->envname("SPARQL_EXEMPLAR_AUTOCOMPLETE_TTL")
      ->capture_default_str();
  serve->add_option("--static-dir", static_dir, "Editor assets served under /")
      ->envname("SPARQL_EXEMPLAR_STATIC_DIR");
  add_timeout(serve);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  client::ExecuteOptions execute;
  execute.timeout = std::chrono::milliseconds(timeout_ms);
  client::PoliteOptions polite;
  polite.max_concurrency = concurrency;
  polite.delay = std::chrono::milliseconds(delay_ms);

  try {
    if (*validate) return cmd_validate(root, json, out);
    if (*fix) return cmd_fix(root, write, hint_ns, out, err);
    if (*stats) return cmd_stats(root, json, out);
    if (*viz) {
      auto manifest = publish::emit_site(load_input(root), file_out);
      out << "wrote " << manifest.pages.size() << " pages to " << file_out << "\n";
      return kExitOk;
    }
    if (*compile) {
      publish::CompileOptions options;
      options.renumber = renumber;
      options.trig = trig;
      auto bundle = publish::compile_target(load_input(root), endpoint, options);
      for (const auto& w : bundle.warnings) err << "warning: " << w << "\n";
      write_file(file_out, bundle.text);
      out << "wrote " << bundle.example_count << " examples for graph <" << bundle.graph_iri << "> to "
          << file_out << "\n";
      return kExitOk;
    }
    if (*export_json) {
      auto corpus = load_input(root);
      write_file(file_out, publish::emit_json(corpus));
      out << "wrote " << corpus.examples.size() << " examples to " << file_out << "\n";
      return kExitOk;
    }
    if (*test_queries) {
      require_network(!endpoint.empty(), remote);
      client::ExampleTestOptions options;
      if (!endpoint.empty()) options.endpoint = endpoint;
      options.polite = polite;
      options.execute = execute;
      auto results = client::test_examples(load_input(root), options);
      std::size_t bad = 0;
      nlohmann::ordered_json doc = nlohmann::ordered_json::array();
      for (const auto& r : results) {
        const bool ok = r.status == client::TestStatus::Pass ||
                        (allow_empty && r.status == client::TestStatus::Empty);
        if (!ok) ++bad;
        if (json) {
          doc.push_back({{"id", r.example_id},
                         {"endpoint", r.endpoint},
                         {"status", client::to_string(r.status)},
                         {"latencyMs", r.latency.count()},
                         {"detail", r.detail}});
        } else {
          out << client::to_string(r.status) << "\t" << r.example_id << "\t" << r.endpoint << "\t"
              << fmt_ms(r.latency) << (r.detail.empty() ? "" : "\t" + r.detail) << "\n";
        }
      }
      if (json) out << doc.dump(2) << "\n";
      else out << results.size() - bad << " of " << results.size() << " passed\n";
      return bad == 0 ? kExitOk : kExitFailure;
    }
    if (*test_federation) {
      require_network(false, remote);
      auto results = client::test_federation_members(load_input(root), polite, execute);
      std::size_t dead = 0;
      nlohmann::ordered_json doc = nlohmann::ordered_json::array();
      for (const auto& r : results) {
        if (r.status != client::TestStatus::Pass) ++dead;
        if (json) {
          doc.push_back({{"endpoint", r.endpoint},
                         {"status", client::to_string(r.status)},
                         {"usedBy", r.used_by},
                         {"detail", r.probe.detail}});
        } else {
          out << client::to_string(r.status) << "\t" << r.endpoint << "\t" << r.used_by.size()
              << " examples\t" << r.probe.detail << "\n";
        }
      }
      if (!json) out << results.size() - dead << " of " << results.size() << " endpoints alive\n";
      else out << doc.dump(2) << "\n";
      return dead == 0 ? kExitOk : kExitFailure;
    }
    if (*check) {
      client::CheckOptions options;
      options.execute = execute;
      options.void_options.execute = execute;
      auto report = client::check_endpoint(endpoint, options);
      out << (json ? report.to_json() : report.to_text());
      return report.passed() ? kExitOk : kExitFailure;
    }
    if (*search) {
      if (query_text.empty()) throw UsageError("--q must not be empty");
      auto corpus = load_input(root);
      auto hits = store::search(corpus, query_text, parse_fields(fields));
      if (json) {
        out << publish::emit_json(hits);
      } else {
        for (const auto& ex : hits) {
          const auto* q = ex.preferred_question();
          out << ex.id << "\t" << (q != nullptr ? q->text : "") << "\n";
        }
      }
      return kExitOk;
    }
    if (*serve) {
      serve_config.proxy_allow_list.insert(allow.begin(), allow.end());
      serve_config.autocomplete_ttl = std::chrono::seconds(ttl_s);
      serve_config.static_dir = static_dir;
      serve_config.execute = execute;
      service::Service svc(load_input(root), serve_config);
      int port = svc.bind();
      if (port < 0) {
        err << "error: cannot bind " << serve_config.bind_address << ":" << serve_config.port << "\n";
        return kExitFailure;
      }
      out << "listening on http://" << serve_config.bind_address << ":" << port << "/" << std::endl;
      return svc.listen() ? kExitOk : kExitFailure;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace exemplar::cli
