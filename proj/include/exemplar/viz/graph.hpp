#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "exemplar/rdf/term.hpp"
#include "exemplar/sparql/ast.hpp"
#include "exemplar/store/example.hpp"

namespace exemplar::viz {

enum class NodeKind { Variable, Iri, Literal, Blank, PathIntermediate };

std::string_view to_string(NodeKind kind);

// Node ids: `v_` variables, `n_` IRIs (from the prefixed form when one
// applies), `l_` literals, `b_` blank nodes, `p_<k>` path intermediates.
// Everything outside [A-Za-z0-9_] becomes `_`; clashes get `_2`, `_3`, ...
struct Node {
  std::string id;
  NodeKind kind;
  std::string label;
  bool projected = false;
};

struct Edge {
  std::string from;
  std::string to;
  std::string label;
  std::size_t index = 0;  // 1-based, document order
  std::string context;    // e.g. "Service(<https://...>)/Optional"; empty at top level
};

struct QueryGraph {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  /// FILTER and BIND clauses, listed beside the diagram.
  std::vector<std::string> annotations;

  const Node* node(std::string_view id) const;
};

/// One node per distinct subject/object across all groups. Sequence paths
/// are split into one edge per step threaded through intermediate nodes,
/// an inverted link becomes a reversed edge, any other path is one edge
/// labelled with its surface syntax.
QueryGraph build_query_graph(const sparql::Query& query);

/// `graph TD` flowchart. Projected variables get the `projected` class;
/// edges under OPTIONAL or SERVICE are dashed.
std::string emit_mermaid(const QueryGraph& graph);

/// Markdown page: question title, other-language questions, endpoint
/// links, keywords, the diagram and the query. When the query does not
/// parse the diagram is replaced by a "diagram unavailable" note.
std::string emit_markdown_page(const store::QueryExample& example,
                               const rdf::PrefixMap& registry = {});

}  // namespace exemplar::viz
