#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "exemplar/rdf/term.hpp"

namespace exemplar::rdf {

/// Raised for any Turtle/TriG input the reader cannot accept.
class TurtleError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UndeclaredPrefix, Unsupported };

  TurtleError(Kind kind, std::string message, std::size_t line, std::size_t column,
              std::string token);

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& token() const { return token_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
  std::string token_;
};

struct TurtleDocument {
  std::vector<Triple> triples;
  PrefixMap prefixes;
};

struct NamedGraphBlock {
  std::optional<Iri> name;  // nullopt for the default graph
  std::vector<Triple> triples;
};

struct TrigDocument {
  std::vector<NamedGraphBlock> graphs;
  PrefixMap prefixes;

  /// All triples regardless of graph, in document order.
  std::vector<Triple> all_triples() const;
};

/// Reads the supported Turtle subset: directives, `a`, `;`/`,` lists,
/// anonymous blank nodes, short and long strings, language tags, numeric
/// and boolean literals. Collections are rejected as Unsupported.
TurtleDocument parse_turtle(std::string_view text, std::optional<std::string> base = {});

/// Same subset plus TriG graph blocks (`<g> { ... }` and `GRAPH <g> { ... }`).
TrigDocument parse_trig(std::string_view text, std::optional<std::string> base = {});

/// Writes prefix directives followed by subject-grouped statements. Blank
/// nodes are relabelled b0, b1, ... in first-encounter order. With `graph`
/// the statements are wrapped in a TriG block.
std::string serialize_turtle(std::span<const Triple> triples, const PrefixMap& prefixes,
                             const std::optional<std::string>& graph = {});

/// Graph isomorphism under a blank-node bijection. Duplicate triples are
/// ignored (set semantics).
bool isomorphic(std::span<const Triple> a, std::span<const Triple> b);

}  // namespace exemplar::rdf
