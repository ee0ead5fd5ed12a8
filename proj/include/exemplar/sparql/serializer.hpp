#pragma once

#include <string>

#include "exemplar/sparql/ast.hpp"

namespace exemplar::sparql {

/// Renders a standard-compliant AST as SPARQL text: prologue first, then the
/// query with upper-case keywords and two-space indentation. IRIs are
/// compacted through the prologue prefixes where the local part allows it.
/// Throws SparqlError::Kind::NonCompliant when the AST still carries
/// named-subquery constructs.
std::string serialize_query(const Query& query);

/// Surface syntax of a property path, e.g. `up:annotation/up:disease`.
std::string render_path(const PropertyPath& path, const rdf::PrefixMap& prefixes);

/// Prefixed-name form of an IRI when a prefix applies, `<iri>` otherwise.
std::string render_iri(const std::string& iri, const rdf::PrefixMap& prefixes);

/// SPARQL surface form of a term or variable.
std::string render_term(const VarOrTerm& term, const rdf::PrefixMap& prefixes);

/// Joins expression tokens with SPARQL-safe spacing.
std::string render_expression(const Expression& expression, const rdf::PrefixMap& prefixes);

}  // namespace exemplar::sparql
