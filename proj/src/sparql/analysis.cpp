#include "exemplar/sparql/analysis.hpp"

#include <algorithm>

namespace exemplar::sparql {

std::set<std::string> PrefixUsage::undeclared() const {
  std::set<std::string> out;
  std::set_difference(used.begin(), used.end(), declared.begin(), declared.end(),
                      std::inserter(out, out.end()));
  return out;
}

PrefixUsage used_prefixes(std::string_view text) {
  PrefixUsage usage;
  auto tokens = tokenize(text);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (t.is_keyword("PREFIX") && i + 1 < tokens.size() &&
        tokens[i + 1].kind == TokenKind::PrefixedName) {
      usage.declared.insert(split_prefixed_name(tokens[i + 1].lexeme).first);
      ++i;
      continue;
    }
    if (t.kind == TokenKind::PrefixedName) usage.used.insert(split_prefixed_name(t.lexeme).first);
  }
  return usage;
}

namespace {

std::string describe(const VarOrIri& v) {
  if (const auto* var = std::get_if<Variable>(&v)) return "?" + var->name;
  return "<" + std::get<rdf::Iri>(v).value + ">";
}

class PatternCollector {
 public:
  PatternCollector(PatternScope scope, std::vector<ScopedPattern>& out) : scope_(scope), out_(out) {}

  void query(const Query& q, std::vector<std::string>& context) {
    if (scope_ == PatternScope::AllGroups) {
      for (const auto& named : q.named_subqueries) {
        context.push_back("NamedSubquery(%" + named.name + ")");
        query(*named.query, context);
        context.pop_back();
      }
    }
    if (q.where) group(*q.where, context);
  }

  void group(const GroupPattern& g, std::vector<std::string>& context) {
    for (const auto& element : g.elements) {
      if (const auto* bgp = std::get_if<Bgp>(&element)) {
        for (const auto& t : bgp->triples) out_.push_back({t, context});
      } else if (const auto* nested = std::get_if<NestedGroup>(&element)) {
        group(*nested->group, context);
      } else if (scope_ == PatternScope::AllGroups) {
        descend(element, context);
      }
    }
  }

 private:
  PatternScope scope_;
  std::vector<ScopedPattern>& out_;

  void within(const std::string& label, const GroupPattern& g, std::vector<std::string>& context) {
    context.push_back(label);
    group(g, context);
    context.pop_back();
  }

  void descend(const PatternElement& element, std::vector<std::string>& context) {
    if (const auto* e = std::get_if<OptionalPattern>(&element)) {
      within("Optional", *e->group, context);
    } else if (const auto* e = std::get_if<UnionPattern>(&element)) {
      for (const auto& alt : e->alternatives) within("Union", alt, context);
    } else if (const auto* e = std::get_if<GraphPattern>(&element)) {
      within("Graph(" + describe(e->name) + ")", *e->group, context);
    } else if (const auto* e = std::get_if<ServicePattern>(&element)) {
      within("Service(" + describe(e->endpoint) + ")", *e->group, context);
    } else if (const auto* e = std::get_if<MinusPattern>(&element)) {
      within("Minus", *e->group, context);
    } else if (const auto* e = std::get_if<SubSelect>(&element)) {
      context.push_back("SubSelect");
      query(*e->query, context);
      context.pop_back();
    }
  }
};

// Document-order walk over every group, including EXISTS operands.
template <typename QueryT, typename GroupT, typename Fn>
void walk_query(QueryT& q, Fn& fn);

template <typename ExprT, typename Fn>
void walk_expression(ExprT& e, Fn& fn);

template <typename GroupT, typename Fn>
void walk_group(GroupT& g, Fn& fn) {
  fn.group(g);
  for (auto& element : g.elements) {
    std::visit(
        [&](auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, NestedGroup> || std::is_same_v<T, OptionalPattern> ||
                        std::is_same_v<T, GraphPattern> || std::is_same_v<T, MinusPattern>) {
            walk_group<GroupT>(*e.group, fn);
          } else if constexpr (std::is_same_v<T, ServicePattern>) {
            fn.service(e);
            walk_group<GroupT>(*e.group, fn);
          } else if constexpr (std::is_same_v<T, UnionPattern>) {
            for (auto& alt : e.alternatives) walk_group<GroupT>(alt, fn);
          } else if constexpr (std::is_same_v<T, SubSelect>) {
            walk_query<decltype(*e.query), GroupT>(*e.query, fn);
          } else if constexpr (std::is_same_v<T, Filter> || std::is_same_v<T, Bind>) {
            walk_expression(e.expression, fn);
          }
        },
        element);
  }
}

template <typename ExprT, typename Fn>
void walk_expression(ExprT& e, Fn& fn) {
  for (auto& item : e.items) {
    if (auto* exists = std::get_if<ExistsGroup>(&item)) walk_group(*exists->group, fn);
  }
}

template <typename QueryT, typename GroupT, typename Fn>
void walk_query(QueryT& q, Fn& fn) {
  for (auto& named : q.named_subqueries) walk_query<decltype(*named.query), GroupT>(*named.query, fn);
  for (auto& item : q.projection.items) {
    if (item.expression) walk_expression(*item.expression, fn);
  }
  if (q.where) walk_group<GroupT>(*q.where, fn);
  for (auto* e : {&q.group_by, &q.having, &q.order_by}) {
    if (*e) walk_expression(**e, fn);
  }
}

struct ServiceCollector {
  std::vector<VarOrIri> endpoints;
  void group(const GroupPattern&) {}
  void service(const ServicePattern& s) { endpoints.push_back(s.endpoint); }
};

struct GroupVisitor {
  const std::function<void(GroupPattern&)>& fn;
  void group(GroupPattern& g) { fn(g); }
  void service(ServicePattern&) {}
};

void add_unique(std::vector<std::string>& out, const std::string& name) {
  if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
}

void add_term(std::vector<std::string>& out, const VarOrTerm& t) {
  if (const auto* v = std::get_if<Variable>(&t)) add_unique(out, v->name);
}

void in_scope(const GroupPattern& g, std::vector<std::string>& out) {
  for (const auto& element : g.elements) {
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, Bgp>) {
            for (const auto& t : e.triples) {
              add_term(out, t.subject);
              if (const auto* v = std::get_if<Variable>(&t.predicate)) add_unique(out, v->name);
              add_term(out, t.object);
            }
          } else if constexpr (std::is_same_v<T, NestedGroup> ||
                               std::is_same_v<T, OptionalPattern> ||
                               std::is_same_v<T, ServicePattern>) {
            in_scope(*e.group, out);
          } else if constexpr (std::is_same_v<T, GraphPattern>) {
            if (const auto* v = std::get_if<Variable>(&e.name)) add_unique(out, v->name);
            in_scope(*e.group, out);
          } else if constexpr (std::is_same_v<T, UnionPattern>) {
            for (const auto& alt : e.alternatives) in_scope(alt, out);
          } else if constexpr (std::is_same_v<T, SubSelect>) {
            for (const auto& name : projected_variables(*e.query)) add_unique(out, name);
          } else if constexpr (std::is_same_v<T, Bind>) {
            add_unique(out, e.variable.name);
          } else if constexpr (std::is_same_v<T, InlineData>) {
            for (const auto& v : e.variables) add_unique(out, v.name);
          }
        },
        element);
  }
}

}  // namespace

std::vector<ScopedPattern> extract_triple_patterns(const Query& query, PatternScope scope) {
  std::vector<ScopedPattern> out;
  std::vector<std::string> context;
  PatternCollector(scope, out).query(query, context);
  return out;
}

std::size_t count_triple_patterns(const Query& query, PatternScope scope) {
  return extract_triple_patterns(query, scope).size();
}

std::vector<VarOrIri> service_endpoints(const Query& query) {
  ServiceCollector collector;
  walk_query<const Query, const GroupPattern>(query, collector);
  return collector.endpoints;
}

Query with_limit(const Query& query, std::uint64_t n) {
  Query copy = query;
  copy.limit = copy.limit ? std::min(*copy.limit, n) : n;
  return copy;
}

std::vector<std::string> projected_variables(const Query& query) {
  std::vector<std::string> out;
  if (query.form != QueryForm::Select) return out;
  if (!query.projection.star) {
    for (const auto& item : query.projection.items) add_unique(out, item.variable.name);
    return out;
  }
  if (query.where) in_scope(*query.where, out);
  if (query.values) {
    for (const auto& v : query.values->variables) add_unique(out, v.name);
  }
  return out;
}

void for_each_group(Query& query, const std::function<void(GroupPattern&)>& fn) {
  GroupVisitor visitor{fn};
  walk_query<Query, GroupPattern>(query, visitor);
}

}  // namespace exemplar::sparql
