#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "exemplar/rdf/term.hpp"
#include "exemplar/store/example.hpp"

namespace exemplar::publish {

inline constexpr std::string_view kWellKnownSuffix = "/.well-known/sparql-examples";

/// Examples graph of an endpoint: scheme and authority, plus the path with a
/// trailing `/sparql` or `/sparql/` segment removed, plus
/// `/.well-known/sparql-examples`. `overrides` maps endpoint IRIs to graph
/// IRIs for endpoints that do not follow the rule.
std::string examples_graph_iri(const std::string& endpoint,
                               const std::map<std::string, std::string>& overrides = {});

struct CompileOptions {
  bool renumber = false;
  bool trig = false;  // wrap the statements in a `<graph> { ... }` block
  std::map<std::string, std::string> graph_overrides;
};

struct Bundle {
  std::string graph_iri;
  std::string text;
  std::size_t example_count = 0;
  std::vector<std::string> warnings;
};

/// RDF statements describing `examples`, with the given subject IRIs.
/// Examples sharing identical prefix declarations share one sh:prefixes
/// resource.
std::vector<rdf::Triple> example_triples(const std::vector<const store::QueryExample*>& examples,
                                         const std::vector<std::string>& subjects);

/// Prefixes used when writing bundles.
rdf::PrefixMap bundle_prefixes();

/// Every example that lists `endpoint` as a target, ordered by source path.
/// With renumbering, subjects become `<graph>/1`, `<graph>/2`, ...
/// Throws std::invalid_argument when `endpoint` is not http(s).
Bundle compile_target(const store::Corpus& corpus, const std::string& endpoint,
                      const CompileOptions& options = {});

struct SiteManifest {
  std::vector<std::filesystem::path> pages;    // example pages
  std::vector<std::filesystem::path> indexes;  // per-project index pages
  std::filesystem::path root_index;
};

/// Writes `index.md`, `<Project>/index.md` and one page per example named
/// after the id's local part (`-2`, `-3`, ... on clashes). Paths in the
/// manifest are relative to `out_dir`.
SiteManifest emit_site(const store::Corpus& corpus, const std::filesystem::path& out_dir);

/// JSON export consumed by template-search interfaces, described by
/// schemas/examples.schema.json.
std::string emit_json(const store::Corpus& corpus);
std::string emit_json(const std::vector<store::QueryExample>& examples);

}  // namespace exemplar::publish
