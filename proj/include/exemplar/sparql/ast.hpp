#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "exemplar/rdf/term.hpp"
#include "exemplar/sparql/token.hpp"

namespace exemplar::sparql {

/// Heap-allocated value with deep-copy semantics, for recursive AST nodes.
template <typename T>
class Box {
 public:
  Box() : ptr_(std::make_unique<T>()) {}
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT(implicit)
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&& other) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&& other) noexcept = default;
  ~Box() = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

struct Variable {
  std::string name;  // without the sigil
  friend bool operator==(const Variable&, const Variable&) = default;
  friend auto operator<=>(const Variable&, const Variable&) = default;
};

using VarOrTerm = std::variant<Variable, rdf::Iri, rdf::BlankNode, rdf::Literal>;
using VarOrIri = std::variant<Variable, rdf::Iri>;

struct PropertyPath {
  enum class Kind { Link, Inverse, Sequence, Alternative, ZeroOrMore, OneOrMore, ZeroOrOne, NegatedSet };

  struct NegatedItem {
    std::string iri;
    bool inverse = false;
    friend bool operator==(const NegatedItem&, const NegatedItem&) = default;
  };

  Kind kind = Kind::Link;
  std::string iri;                   // Link
  std::vector<PropertyPath> members;  // one for Inverse and the modifiers, >= 2 for Sequence/Alternative
  std::vector<NegatedItem> negated;   // NegatedSet

  static PropertyPath link(std::string iri) { return {Kind::Link, std::move(iri), {}, {}}; }
  static PropertyPath unary(Kind kind, PropertyPath inner) {
    PropertyPath p{kind, {}, {}, {}};
    p.members.push_back(std::move(inner));
    return p;
  }
  static PropertyPath nary(Kind kind, std::vector<PropertyPath> members) {
    return {kind, {}, std::move(members), {}};
  }

  bool is_link() const { return kind == Kind::Link; }

  friend bool operator==(const PropertyPath&, const PropertyPath&) = default;
};

using Verb = std::variant<Variable, PropertyPath>;

struct TriplePattern {
  VarOrTerm subject;
  Verb predicate;
  VarOrTerm object;
  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

struct GroupPattern;
struct Query;

struct ExprToken {
  TokenKind kind;
  std::string text;  // canonical token text
  friend bool operator==(const ExprToken&, const ExprToken&) = default;
};

/// The `{ ... }` operand of EXISTS / NOT EXISTS inside an expression.
struct ExistsGroup {
  Box<GroupPattern> group;
  friend bool operator==(const ExistsGroup&, const ExistsGroup&) = default;
};

using ExprItem = std::variant<ExprToken, ExistsGroup>;

/// Expressions are kept as balanced token spans rather than typed trees.
struct Expression {
  std::vector<ExprItem> items;

  /// Distinct variable names mentioned, in first-occurrence order. EXISTS
  /// groups are not descended into.
  std::vector<std::string> variables() const;

  friend bool operator==(const Expression&, const Expression&) = default;
};

struct Bgp {
  std::vector<TriplePattern> triples;
  friend bool operator==(const Bgp&, const Bgp&) = default;
};

/// A plain nested `{ ... }` group.
struct NestedGroup {
  Box<GroupPattern> group;
  friend bool operator==(const NestedGroup&, const NestedGroup&) = default;
};

struct OptionalPattern {
  Box<GroupPattern> group;
  friend bool operator==(const OptionalPattern&, const OptionalPattern&) = default;
};

struct UnionPattern {
  std::vector<GroupPattern> alternatives;  // at least two
  friend bool operator==(const UnionPattern&, const UnionPattern&) = default;
};

struct GraphPattern {
  VarOrIri name;
  Box<GroupPattern> group;
  friend bool operator==(const GraphPattern&, const GraphPattern&) = default;
};

struct ServicePattern {
  VarOrIri endpoint;
  bool silent = false;
  Box<GroupPattern> group;
  friend bool operator==(const ServicePattern&, const ServicePattern&) = default;
};

struct SubSelect {
  Box<Query> query;
  friend bool operator==(const SubSelect&, const SubSelect&) = default;
};

struct Filter {
  Expression expression;
  friend bool operator==(const Filter&, const Filter&) = default;
};

struct Bind {
  Expression expression;
  Variable variable;
  friend bool operator==(const Bind&, const Bind&) = default;
};

struct InlineData {
  std::vector<Variable> variables;
  std::vector<std::vector<std::optional<rdf::Term>>> rows;  // nullopt = UNDEF
  friend bool operator==(const InlineData&, const InlineData&) = default;
};

struct MinusPattern {
  Box<GroupPattern> group;
  friend bool operator==(const MinusPattern&, const MinusPattern&) = default;
};

/// `INCLUDE %name`, only produced by the extended dialect.
struct NamedInclude {
  std::string name;
  friend bool operator==(const NamedInclude&, const NamedInclude&) = default;
};

using PatternElement =
    std::variant<Bgp, NestedGroup, OptionalPattern, UnionPattern, GraphPattern, ServicePattern,
                 SubSelect, Filter, Bind, InlineData, MinusPattern, NamedInclude>;

struct GroupPattern {
  std::vector<PatternElement> elements;
  bool empty() const { return elements.empty(); }
  friend bool operator==(const GroupPattern&, const GroupPattern&) = default;
};

enum class QueryForm { Select, Ask, Construct, Describe };
enum class SelectModifier { None, Distinct, Reduced };

std::string_view to_string(QueryForm form);

struct Prologue {
  std::optional<std::string> base;
  rdf::PrefixMap prefixes;
  /// Labels that were resolved from caller-supplied fallback prefixes. They
  /// are also present in `prefixes`. Diagnostic only: not part of equality.
  std::vector<std::string> injected;

  friend bool operator==(const Prologue& a, const Prologue& b) {
    return a.base == b.base && a.prefixes == b.prefixes;
  }
};

struct ProjectionItem {
  std::optional<Expression> expression;  // set for `(expr AS ?var)`
  Variable variable;
  friend bool operator==(const ProjectionItem&, const ProjectionItem&) = default;
};

struct Projection {
  bool star = false;
  std::vector<ProjectionItem> items;
  friend bool operator==(const Projection&, const Projection&) = default;
};

struct DatasetClause {
  std::string iri;
  bool named = false;
  friend bool operator==(const DatasetClause&, const DatasetClause&) = default;
};

/// `WITH { SELECT ... } AS %name`, only produced by the extended dialect.
struct NamedSubquery {
  std::string name;
  Box<Query> query;
  friend bool operator==(const NamedSubquery&, const NamedSubquery&) = default;
};

struct Query {
  QueryForm form = QueryForm::Select;
  Prologue prologue;
  SelectModifier modifier = SelectModifier::None;
  Projection projection;                 // Select only
  std::vector<VarOrIri> describe_targets;  // Describe only; empty with describe_star
  bool describe_star = false;
  std::vector<TriplePattern> construct_template;  // Construct only
  std::vector<DatasetClause> dataset;
  std::optional<GroupPattern> where;  // only DESCRIBE may omit it
  std::optional<Expression> group_by;
  std::optional<Expression> having;
  std::optional<Expression> order_by;
  std::optional<std::uint64_t> limit;
  std::optional<std::uint64_t> offset;
  std::optional<InlineData> values;
  std::vector<NamedSubquery> named_subqueries;

  friend bool operator==(const Query&, const Query&) = default;
};

}  // namespace exemplar::sparql
