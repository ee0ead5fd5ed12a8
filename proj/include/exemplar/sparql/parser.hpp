#pragma once

#include <string_view>

#include "exemplar/rdf/term.hpp"
#include "exemplar/sparql/ast.hpp"

namespace exemplar::sparql {

enum class Dialect {
  Strict,    // SPARQL 1.1 query forms only
  Extended,  // plus named subqueries: `WITH { ... } AS %n` and `INCLUDE %n`
};

struct ParseOptions {
  /// Fallbacks for prefixed names the query does not declare. Every label
  /// taken from here is recorded in `Prologue::injected`.
  rdf::PrefixMap extra_prefixes;
  Dialect dialect = Dialect::Strict;
};

/// Throws SparqlError: Syntax, UndeclaredPrefix, UnknownForm, or NonCompliant
/// for named-subquery constructs under the strict dialect.
Query parse_query(std::string_view text, const ParseOptions& options = {});

inline Query parse_query(std::string_view text, Dialect dialect) {
  return parse_query(text, ParseOptions{{}, dialect});
}

}  // namespace exemplar::sparql
