#include "exemplar/publish/publish.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>
#include <stdexcept>

#include "exemplar/rdf/turtle.hpp"
#include "exemplar/viz/graph.hpp"

namespace exemplar::publish {

namespace fs = std::filesystem;

namespace {

bool is_http(const std::string& iri) {
  return iri.starts_with("http://") || iri.starts_with("https://");
}

std::string strip_slash(std::string s) {
  if (s.size() > 1 && s.back() == '/') s.pop_back();
  return s;
}

std::string file_stem_for(const std::string& id) {
  auto cut = id.find_last_of("#/");
  std::string local = cut == std::string::npos ? id : id.substr(cut + 1);
  std::string out;
  for (char c : local) {
    auto u = static_cast<unsigned char>(c);
    out += (std::isalnum(u) && u < 0x80) || c == '-' || c == '_' || c == '.' ? c : '_';
  }
  if (out.empty() || out.front() == '.') out = "example" + out;
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string link_text(const store::QueryExample& ex) {
  const auto* q = ex.preferred_question();
  std::string text = q != nullptr ? q->text : ex.id;
  for (char& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
    if (c == '[' || c == ']') c = ' ';
  }
  return text;
}

}  // namespace

std::string examples_graph_iri(const std::string& endpoint,
                               const std::map<std::string, std::string>& overrides) {
  if (auto it = overrides.find(endpoint); it != overrides.end()) return it->second;
  auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) return strip_slash(endpoint) + std::string(kWellKnownSuffix);
  auto authority_end = endpoint.find_first_of("/?#", scheme_end + 3);
  std::string origin = endpoint.substr(0, authority_end);
  std::string path;
  if (authority_end != std::string::npos && endpoint[authority_end] == '/') {
    auto path_end = endpoint.find_first_of("?#", authority_end);
    path = endpoint.substr(authority_end, path_end == std::string::npos ? std::string::npos
                                                                        : path_end - authority_end);
  }
  if (path.ends_with("/")) path.pop_back();
  if (path.ends_with("/sparql")) path.resize(path.size() - 7);
  while (path.ends_with("/")) path.pop_back();
  return origin + path + std::string(kWellKnownSuffix);
}

rdf::PrefixMap bundle_prefixes() {
  return {{"rdf", std::string(rdf::vocab::kRdf)},
          {"rdfs", std::string(rdf::vocab::kRdfs)},
          {"sh", std::string(rdf::vocab::kShacl)},
          {"schema", std::string(rdf::vocab::kSchema)},
          {"spex", std::string(rdf::vocab::kSparqlExamples)},
          {"xsd", std::string(rdf::vocab::kXsd)}};
}

std::vector<rdf::Triple> example_triples(const std::vector<const store::QueryExample*>& examples,
                                         const std::vector<std::string>& subjects) {
  using rdf::BlankNode;
  using rdf::Iri;
  using rdf::Literal;
  std::vector<rdf::Triple> out;
  std::vector<std::pair<const rdf::PrefixMap*, std::string>> resources;

  auto resource_for = [&](const rdf::PrefixMap& decls) {
    for (const auto& [map, label] : resources) {
      if (*map == decls) return label;
    }
    std::string label = "sparql_examples_prefixes";
    if (!resources.empty()) label += "_" + std::to_string(resources.size() + 1);
    resources.emplace_back(&decls, label);
    return label;
  };

  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = *examples[i];
    const Iri s{subjects[i]};
    for (const auto& type : ex.types) out.push_back({s, Iri{rdf::vocab::kRdfType}, Iri{type}});
    if (ex.has_prefixes_link) {
      out.push_back({s, Iri{store::vocab::kPrefixes}, BlankNode{resource_for(ex.prefix_decls)}});
    }
    for (const auto& q : ex.questions) {
      out.push_back({s, Iri{store::vocab::kComment},
                     q.lang.empty() ? Literal::plain(q.text) : Literal::tagged(q.text, q.lang)});
    }
    out.push_back({s, Iri{store::query_property(ex.query_type)}, Literal::plain(ex.query_text)});
    for (const auto& t : ex.targets) out.push_back({s, Iri{store::vocab::kTarget}, Iri{t}});
    for (const auto& k : ex.keywords) out.push_back({s, Iri{store::vocab::kKeywords}, Literal::plain(k)});
  }

  for (const auto& [map, label] : resources) {
    std::size_t k = 0;
    for (const auto& [prefix, ns] : map->entries()) {
      BlankNode decl{label + "_decl" + std::to_string(k++)};
      out.push_back({BlankNode{label}, Iri{store::vocab::kDeclare}, decl});
      out.push_back({decl, Iri{store::vocab::kPrefix}, Literal::plain(prefix)});
      out.push_back({decl, Iri{store::vocab::kNamespace}, Literal::typed(ns, store::vocab::kXsdAnyUri)});
    }
  }
  return out;
}

Bundle compile_target(const store::Corpus& corpus, const std::string& endpoint,
                      const CompileOptions& options) {
  if (!is_http(endpoint)) throw std::invalid_argument("endpoint must be an http(s) IRI: " + endpoint);
  Bundle bundle;
  bundle.graph_iri = examples_graph_iri(endpoint, options.graph_overrides);

  std::vector<const store::QueryExample*> matching;
  const std::string wanted = strip_slash(endpoint);
  for (const auto& ex : corpus.examples) {
    if (std::any_of(ex.targets.begin(), ex.targets.end(),
                    [&](const std::string& t) { return strip_slash(t) == wanted; })) {
      matching.push_back(&ex);
    }
  }
  std::stable_sort(matching.begin(), matching.end(), [](const auto* a, const auto* b) {
    return std::tie(a->source_path, a->id) < std::tie(b->source_path, b->id);
  });

  std::vector<std::string> subjects;
  for (std::size_t i = 0; i < matching.size(); ++i) {
    subjects.push_back(options.renumber ? bundle.graph_iri + "/" + std::to_string(i + 1)
                                        : matching[i]->id);
  }
  rdf::PrefixMap prefixes = bundle_prefixes();
  if (options.renumber) prefixes.declare("ex", bundle.graph_iri + "/");

  auto triples = example_triples(matching, subjects);
  bundle.example_count = matching.size();
  if (matching.empty()) bundle.warnings.push_back("no examples target " + endpoint);
  bundle.text = rdf::serialize_turtle(
      triples, prefixes, options.trig ? std::optional(bundle.graph_iri) : std::nullopt);
  return bundle;
}

SiteManifest emit_site(const store::Corpus& corpus, const fs::path& out_dir) {
  SiteManifest manifest;
  std::map<std::string, std::vector<const store::QueryExample*>> by_project;
  for (const auto& ex : corpus.examples) by_project[ex.project].push_back(&ex);

  std::string root = "# SPARQL examples\n\n";
  if (!by_project.empty()) root += "| Project | Examples |\n|---|---|\n";
  for (const auto& [project, examples] : by_project) {
    const std::string dir = project.empty() ? "default" : project;
    root += "| [" + dir + "](" + dir + "/index.md) | " + std::to_string(examples.size()) + " |\n";

    std::set<std::string> taken{"index"};
    std::string index = "# " + dir + "\n\n";
    for (const auto* ex : examples) {
      std::string stem = file_stem_for(ex->id);
      std::string name = stem;
      for (int n = 2; taken.contains(name); ++n) name = stem + "-" + std::to_string(n);
      taken.insert(name);
      fs::path rel = fs::path(dir) / (name + ".md");
      write_file(out_dir / rel, viz::emit_markdown_page(*ex, corpus.prefix_registry));
      manifest.pages.push_back(rel);
      index += "- [" + link_text(*ex) + "](" + name + ".md)\n";
    }
    fs::path index_rel = fs::path(dir) / "index.md";
    write_file(out_dir / index_rel, index);
    manifest.indexes.push_back(index_rel);
  }
  write_file(out_dir / "index.md", root);
  manifest.root_index = "index.md";
  return manifest;
}

std::string emit_json(const std::vector<store::QueryExample>& examples) {
  std::vector<const store::QueryExample*> sorted;
  for (const auto& ex : examples) sorted.push_back(&ex);
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return std::tie(a->project, a->id) < std::tie(b->project, b->id);
  });
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto* ex : sorted) {
    const auto* q = ex->preferred_question();
    nlohmann::ordered_json j;
    j["id"] = ex->id;
    j["question"] = q != nullptr ? q->text : "";
    j["lang"] = q != nullptr ? q->lang : "";
    j["query"] = ex->query_text;
    j["endpoints"] = ex->targets;
    j["keywords"] = ex->keywords;
    j["category"] = ex->project;
    doc.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::string emit_json(const store::Corpus& corpus) { return emit_json(corpus.examples); }

}  // namespace exemplar::publish
