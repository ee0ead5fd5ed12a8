#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "exemplar/rdf/term.hpp"
#include "exemplar/sparql/ast.hpp"

namespace exemplar::fixer {

inline constexpr std::string_view kBlazegraphHints = "http://www.bigdata.com/queryHints#";
inline constexpr std::string_view kNeptuneHints = "http://aws.amazon.com/neptune/vocab/v01/QueryHints#";

std::vector<std::string> default_hint_namespaces();

enum class FixKind { NamedSubquery, HintTriples, PrefixInjection };

std::string_view to_string(FixKind kind);

struct AppliedFix {
  FixKind fix;
  std::string detail;
  std::size_t count = 0;
  friend bool operator==(const AppliedFix&, const AppliedFix&) = default;
};

struct FixReport {
  std::vector<AppliedFix> applied;
  std::vector<std::string> warnings;
  std::vector<std::string> unresolved_prefixes;

  bool changed() const { return !applied.empty(); }
  const AppliedFix* find(FixKind kind) const;
  void merge(const FixReport& other);
};

class FixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inlines every `INCLUDE %n` as `{ S }` and drops the `WITH { S } AS %n`
/// declarations, working on the token stream so the rest of the text is
/// kept verbatim. Throws FixError for an INCLUDE of an undeclared name or a
/// cyclic definition.
std::pair<std::string, FixReport> rewrite_named_subqueries(std::string_view text);

/// Removes triple patterns whose subject or predicate IRI lies in one of the
/// hint namespaces, in every group. Emptied BGPs disappear; a group that is
/// left with no elements stays as `{ }` and is reported as a warning.
std::pair<sparql::Query, FixReport> strip_query_hints(const sparql::Query& query,
                                                      const std::vector<std::string>& hint_namespaces);

/// Prepends `PREFIX` lines (sorted by label) for used-but-undeclared labels
/// that `registry` knows. Unknown labels are listed in
/// `unresolved_prefixes` and leave the text untouched.
std::pair<std::string, FixReport> inject_prefixes(std::string_view text, const rdf::PrefixMap& registry);

/// Named-subquery rewrite, prefix injection when parsing needs it, hint
/// stripping and, when hints were removed, re-serialization. Returns the
/// input unchanged when nothing applies. The result always parses in the
/// strict dialect; otherwise FixError carries the last parse error.
std::pair<std::string, FixReport> fix_all(std::string_view text, const rdf::PrefixMap& registry,
                                          const std::vector<std::string>& hint_namespaces =
                                              default_hint_namespaces());

}  // namespace exemplar::fixer
