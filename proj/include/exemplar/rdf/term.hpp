#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace exemplar::rdf {

namespace vocab {
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kShacl = "http://www.w3.org/ns/shacl#";
inline constexpr std::string_view kSchema = "https://schema.org/";
inline constexpr std::string_view kSchemaHttp = "http://schema.org/";
inline constexpr std::string_view kSparqlExamples =
    "https://purl.expasy.org/sparql-examples/ontology#";

inline const std::string kRdfType = std::string(kRdf) + "type";
inline const std::string kLangString = std::string(kRdf) + "langString";
inline const std::string kXsdString = std::string(kXsd) + "string";
inline const std::string kXsdInteger = std::string(kXsd) + "integer";
inline const std::string kXsdDecimal = std::string(kXsd) + "decimal";
inline const std::string kXsdDouble = std::string(kXsd) + "double";
inline const std::string kXsdBoolean = std::string(kXsd) + "boolean";
}  // namespace vocab

struct Iri {
  std::string value;
  friend bool operator==(const Iri&, const Iri&) = default;
  friend auto operator<=>(const Iri&, const Iri&) = default;
};

struct BlankNode {
  std::string label;
  friend bool operator==(const BlankNode&, const BlankNode&) = default;
  friend auto operator<=>(const BlankNode&, const BlankNode&) = default;
};

/// A literal always carries a datatype; language-tagged literals use
/// rdf:langString. Use the factory functions to keep that invariant.
struct Literal {
  std::string lexical;
  std::string datatype = vocab::kXsdString;
  std::string language;

  static Literal plain(std::string lexical) { return {std::move(lexical), vocab::kXsdString, {}}; }
  static Literal tagged(std::string lexical, std::string lang) {
    return {std::move(lexical), vocab::kLangString, std::move(lang)};
  }
  static Literal typed(std::string lexical, std::string datatype) {
    return {std::move(lexical), std::move(datatype), {}};
  }

  bool has_language() const { return !language.empty(); }

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

using Term = std::variant<Iri, BlankNode, Literal>;

inline bool is_iri(const Term& t) { return std::holds_alternative<Iri>(t); }
inline bool is_blank(const Term& t) { return std::holds_alternative<BlankNode>(t); }
inline bool is_literal(const Term& t) { return std::holds_alternative<Literal>(t); }

/// Subjects are IRIs or blank nodes; the predicate type enforces IRI-ness.
struct Triple {
  Term subject;
  Iri predicate;
  Term object;
  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

/// N-Triples style rendering, used for diagnostics and test output.
std::string to_string(const Term& term);
std::string to_string(const Triple& triple);

/// True when `iri` has a URI scheme (`[A-Za-z][A-Za-z0-9+.-]*:`).
bool has_scheme(std::string_view iri);

/// RFC 3986 reference resolution. Returns `ref` unchanged when it is
/// already absolute; returns nullopt for a relative `ref` with an empty base.
std::optional<std::string> resolve_iri(std::string_view base, std::string_view ref);

/// Ordered prefix-label → namespace mapping. Redeclaring a label replaces
/// its namespace in place.
class PrefixMap {
 public:
  using Entry = std::pair<std::string, std::string>;

  PrefixMap() = default;
  PrefixMap(std::initializer_list<Entry> entries);

  void declare(std::string label, std::string ns);
  /// Adds the entry only when `label` is not yet bound.
  bool declare_if_absent(const std::string& label, const std::string& ns);

  std::optional<std::string> find(std::string_view label) const;
  bool contains(std::string_view label) const { return find(label).has_value(); }

  /// Throws UndeclaredPrefixError for unknown labels.
  std::string expand(std::string_view label, std::string_view local) const;

  /// Longest-namespace compaction into `label:local`, only when the local
  /// part is a safe PN_LOCAL.
  std::optional<std::string> compact(std::string_view iri) const;

  /// Appends all entries of `other` whose labels are not yet bound.
  void merge_missing(const PrefixMap& other);

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  friend bool operator==(const PrefixMap&, const PrefixMap&) = default;

 private:
  std::vector<Entry> entries_;
};

/// True when `local` can be written after `prefix:` without escapes.
bool is_safe_local_name(std::string_view local);

class UndeclaredPrefixError : public std::exception {
 public:
  explicit UndeclaredPrefixError(std::string label)
      : label_(std::move(label)), message_("undeclared prefix '" + label_ + ":'") {}
  const std::string& label() const { return label_; }
  const char* what() const noexcept override { return message_.c_str(); }

 private:
  std::string label_;
  std::string message_;
};

}  // namespace exemplar::rdf
