#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "exemplar/sparql/ast.hpp"

namespace exemplar::sparql {

struct PrefixUsage {
  std::set<std::string> declared;
  std::set<std::string> used;

  std::set<std::string> undeclared() const;
};

/// Token-level prefix census; works on queries that fail to parse because
/// of missing prefix declarations.
PrefixUsage used_prefixes(std::string_view text);

enum class PatternScope { AllGroups, TopLevelOnly };

struct ScopedPattern {
  TriplePattern pattern;
  /// Enclosing constructs from the outside in, e.g.
  /// {"Service(<https://sparql.rhea-db.org/sparql>)", "Optional"}.
  std::vector<std::string> context;
};

/// Triple patterns in document order. AllGroups descends into OPTIONAL,
/// UNION, GRAPH, SERVICE, MINUS, sub-selects and named subqueries; FILTER
/// EXISTS groups are not visited.
std::vector<ScopedPattern> extract_triple_patterns(const Query& query, PatternScope scope);

std::size_t count_triple_patterns(const Query& query,
                                  PatternScope scope = PatternScope::AllGroups);

/// Each SERVICE target once per occurrence, in document order.
std::vector<VarOrIri> service_endpoints(const Query& query);

inline bool is_federated(const Query& query) { return !service_endpoints(query).empty(); }

/// Copy whose top-level LIMIT is min(existing, n), or n when absent.
Query with_limit(const Query& query, std::uint64_t n);

/// Names of the projected variables; for `SELECT *` every in-scope variable of
/// the WHERE clause (sub-selects contribute their projection, MINUS and
/// FILTER nothing), in first-occurrence order. Empty for non-SELECT forms.
std::vector<std::string> projected_variables(const Query& query);

/// Visits every group (including nested, union branches, sub-selects,
/// named subqueries and EXISTS groups) in pre-order.
void for_each_group(Query& query, const std::function<void(GroupPattern&)>& fn);

}  // namespace exemplar::sparql
