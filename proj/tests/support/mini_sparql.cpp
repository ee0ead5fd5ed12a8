#include "mini_sparql.hpp"

#include <algorithm>
#include <optional>

namespace exemplar::testing {

namespace {

using Binding = std::map<std::string, rdf::Term>;

std::optional<Binding> merge(const Binding& a, const Binding& b) {
  Binding out = a;
  for (const auto& [k, v] : b) {
    auto it = out.find(k);
    if (it != out.end()) {
      if (!(it->second == v)) return std::nullopt;
    } else {
      out.emplace(k, v);
    }
  }
  return out;
}

std::vector<Binding> join(const std::vector<Binding>& left, const std::vector<Binding>& right) {
  std::vector<Binding> out;
  for (const auto& l : left) {
    for (const auto& r : right) {
      if (auto m = merge(l, r)) out.push_back(std::move(*m));
    }
  }
  return out;
}

std::vector<Binding> left_join(const std::vector<Binding>& left, const std::vector<Binding>& right) {
  std::vector<Binding> out;
  for (const auto& l : left) {
    bool any = false;
    for (const auto& r : right) {
      if (auto m = merge(l, r)) {
        out.push_back(std::move(*m));
        any = true;
      }
    }
    if (!any) out.push_back(l);
  }
  return out;
}

// Blank nodes in patterns behave like variables.
std::optional<std::string> var_name(const sparql::VarOrTerm& t) {
  if (const auto* v = std::get_if<sparql::Variable>(&t)) return v->name;
  if (const auto* b = std::get_if<rdf::BlankNode>(&t)) return "_:" + b->label;
  return std::nullopt;
}

rdf::Term constant(const sparql::VarOrTerm& t) {
  if (const auto* i = std::get_if<rdf::Iri>(&t)) return *i;
  if (const auto* l = std::get_if<rdf::Literal>(&t)) return *l;
  throw Unsupported("pattern term");
}

bool bind_slot(Binding& b, const sparql::VarOrTerm& pattern, const rdf::Term& value) {
  if (auto name = var_name(pattern)) {
    auto it = b.find(*name);
    if (it != b.end()) return it->second == value;
    b.emplace(*name, value);
    return true;
  }
  return constant(pattern) == value;
}

std::vector<Binding> match(const sparql::TriplePattern& tp, const std::vector<rdf::Triple>& data) {
  std::vector<Binding> out;
  for (const auto& t : data) {
    Binding b;
    if (!bind_slot(b, tp.subject, t.subject)) continue;
    if (const auto* v = std::get_if<sparql::Variable>(&tp.predicate)) {
      if (!bind_slot(b, *v, t.predicate)) continue;
    } else {
      const auto& path = std::get<sparql::PropertyPath>(tp.predicate);
      if (!path.is_link()) throw Unsupported("property path");
      if (path.iri != t.predicate.value) continue;
    }
    if (!bind_slot(b, tp.object, t.object)) continue;
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<Binding> eval_query(const sparql::Query& q, const std::vector<rdf::Triple>& data);

std::vector<Binding> eval_group(const sparql::GroupPattern& g, const std::vector<rdf::Triple>& data) {
  std::vector<Binding> acc{Binding{}};
  for (const auto& element : g.elements) {
    if (const auto* bgp = std::get_if<sparql::Bgp>(&element)) {
      for (const auto& tp : bgp->triples) acc = join(acc, match(tp, data));
    } else if (const auto* nested = std::get_if<sparql::NestedGroup>(&element)) {
      acc = join(acc, eval_group(*nested->group, data));
    } else if (const auto* sub = std::get_if<sparql::SubSelect>(&element)) {
      acc = join(acc, eval_query(*sub->query, data));
    } else if (const auto* u = std::get_if<sparql::UnionPattern>(&element)) {
      std::vector<Binding> all;
      for (const auto& alt : u->alternatives) {
        auto part = eval_group(alt, data);
        all.insert(all.end(), part.begin(), part.end());
      }
      acc = join(acc, all);
    } else if (const auto* opt = std::get_if<sparql::OptionalPattern>(&element)) {
      acc = left_join(acc, eval_group(*opt->group, data));
    } else {
      throw Unsupported("group element");
    }
  }
  return acc;
}

std::vector<Binding> eval_query(const sparql::Query& q, const std::vector<rdf::Triple>& data) {
  if (q.form != sparql::QueryForm::Select) throw Unsupported("query form");
  if (!q.named_subqueries.empty()) throw Unsupported("named subquery");
  if (q.group_by || q.having || q.order_by || q.values || q.offset) throw Unsupported("solution modifier");
  auto solutions = eval_group(q.where ? *q.where : sparql::GroupPattern{}, data);
  std::vector<Binding> projected;
  for (const auto& s : solutions) {
    Binding p;
    if (q.projection.star) {
      for (const auto& [k, v] : s) {
        if (!k.starts_with("_:")) p.emplace(k, v);
      }
    } else {
      for (const auto& item : q.projection.items) {
        if (item.expression) throw Unsupported("projection expression");
        if (auto it = s.find(item.variable.name); it != s.end()) p.emplace(it->first, it->second);
      }
    }
    projected.push_back(std::move(p));
  }
  if (q.modifier == sparql::SelectModifier::Distinct) {
    std::vector<Binding> unique;
    for (auto& p : projected) {
      if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(std::move(p));
    }
    projected = std::move(unique);
  }
  if (q.limit && projected.size() > *q.limit) projected.resize(*q.limit);
  return projected;
}

}  // namespace

std::vector<Solution> evaluate(const sparql::Query& query, const std::vector<rdf::Triple>& data) {
  std::vector<Solution> out;
  for (const auto& b : eval_query(query, data)) {
    Solution s;
    for (const auto& [k, v] : b) s.emplace(k, rdf::to_string(v));
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace exemplar::testing
