#include "exemplar/sparql/serializer.hpp"

#include <regex>

namespace exemplar::sparql {

namespace {

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 2, ' '); }

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

bool bare_numeric(const rdf::Literal& lit) {
  static const std::regex integer(R"([+-]?[0-9]+)");
  static const std::regex decimal(R"([+-]?[0-9]*\.[0-9]+)");
  static const std::regex dbl(R"([+-]?([0-9]+\.[0-9]*|\.?[0-9]+)[eE][+-]?[0-9]+)");
  if (lit.has_language()) return false;
  if (lit.datatype == rdf::vocab::kXsdInteger) return std::regex_match(lit.lexical, integer);
  if (lit.datatype == rdf::vocab::kXsdDecimal) return std::regex_match(lit.lexical, decimal);
  if (lit.datatype == rdf::vocab::kXsdDouble) return std::regex_match(lit.lexical, dbl);
  if (lit.datatype == rdf::vocab::kXsdBoolean) return lit.lexical == "true" || lit.lexical == "false";
  return false;
}

std::string render_literal(const rdf::Literal& lit, const rdf::PrefixMap& prefixes) {
  if (bare_numeric(lit)) return lit.lexical;
  if (lit.has_language()) return quote(lit.lexical) + "@" + lit.language;
  if (lit.datatype == rdf::vocab::kXsdString) return quote(lit.lexical);
  return quote(lit.lexical) + "^^" + render_iri(lit.datatype, prefixes);
}

std::string render_var_or_iri(const VarOrIri& v, const rdf::PrefixMap& prefixes) {
  if (const auto* var = std::get_if<Variable>(&v)) return "?" + var->name;
  return render_iri(std::get<rdf::Iri>(v).value, prefixes);
}

std::string render_data_value(const std::optional<rdf::Term>& value, const rdf::PrefixMap& prefixes) {
  if (!value) return "UNDEF";
  return std::visit(
      [&](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, rdf::Iri>) {
          return render_iri(t.value, prefixes);
        } else if constexpr (std::is_same_v<T, rdf::Literal>) {
          return render_literal(t, prefixes);
        } else {
          return "_:" + t.label;
        }
      },
      *value);
}

class Writer {
 public:
  explicit Writer(const rdf::PrefixMap& prefixes) : prefixes_(prefixes) {}

  std::string query(const Query& q, int indent) {
    if (!q.named_subqueries.empty()) {
      throw SparqlError(SparqlError::Kind::NonCompliant,
                        "named subquery '%" + q.named_subqueries.front().name +
                            "' must be inlined before serialization");
    }
    std::string out = pad(indent);
    switch (q.form) {
      case QueryForm::Select:
        out += "SELECT";
        if (q.modifier == SelectModifier::Distinct) out += " DISTINCT";
        if (q.modifier == SelectModifier::Reduced) out += " REDUCED";
        if (q.projection.star) {
          out += " *";
        } else {
          for (const auto& item : q.projection.items) {
            if (item.expression) {
              out += " (" + expression(*item.expression, indent) + " AS ?" + item.variable.name + ")";
            } else {
              out += " ?" + item.variable.name;
            }
          }
        }
        break;
      case QueryForm::Ask:
        out += "ASK";
        break;
      case QueryForm::Construct:
        out += "CONSTRUCT ";
        out += triples_block(q.construct_template, indent);
        break;
      case QueryForm::Describe:
        out += "DESCRIBE";
        if (q.describe_star) {
          out += " *";
        } else {
          for (const auto& target : q.describe_targets) out += " " + render_var_or_iri(target, prefixes_);
        }
        break;
    }
    for (const auto& d : q.dataset) {
      out += "\n" + pad(indent) + (d.named ? "FROM NAMED " : "FROM ") + render_iri(d.iri, prefixes_);
    }
    if (q.where) {
      out += q.dataset.empty() ? " " : "\n" + pad(indent);
      out += "WHERE " + group(*q.where, indent);
    }
    if (q.group_by) out += "\n" + pad(indent) + "GROUP BY " + expression(*q.group_by, indent);
    if (q.having) out += "\n" + pad(indent) + "HAVING " + expression(*q.having, indent);
    if (q.order_by) out += "\n" + pad(indent) + "ORDER BY " + expression(*q.order_by, indent);
    if (q.limit) out += "\n" + pad(indent) + "LIMIT " + std::to_string(*q.limit);
    if (q.offset) out += "\n" + pad(indent) + "OFFSET " + std::to_string(*q.offset);
    if (q.values) out += "\n" + pad(indent) + inline_data(*q.values, indent);
    return out;
  }

  // Opening brace is written at the current position; the closing brace is
  // aligned with `indent`.
  std::string group(const GroupPattern& g, int indent) {
    if (g.empty()) return "{ }";
    std::string out = "{";
    for (const auto& element : g.elements) {
      std::string rendered = pattern_element(element, indent + 1);
      if (!rendered.empty()) out += "\n" + rendered;
    }
    return out + "\n" + pad(indent) + "}";
  }

  std::string expression(const Expression& e, int indent) {
    std::string out;
    const ExprToken* prev = nullptr;
    for (std::size_t i = 0; i < e.items.size(); ++i) {
      const auto& item = e.items[i];
      if (const auto* exists = std::get_if<ExistsGroup>(&item)) {
        out += " " + group(*exists->group, indent);
        prev = nullptr;
        continue;
      }
      const auto& tok = std::get<ExprToken>(item);
      bool space = !out.empty();
      if (prev != nullptr) {
        const bool prev_open = prev->kind == TokenKind::Punctuation && prev->text == "(";
        const bool prev_dt = prev->kind == TokenKind::Punctuation && prev->text == "^^";
        const bool call = tok.kind == TokenKind::Punctuation && tok.text == "(" &&
                          (prev->kind == TokenKind::Keyword || prev->kind == TokenKind::Iri ||
                           prev->kind == TokenKind::PrefixedName);
        const bool closing = tok.kind == TokenKind::Punctuation &&
                             (tok.text == ")" || tok.text == "," || tok.text == "^^");
        if (prev_open || prev_dt || call || closing || tok.kind == TokenKind::LangTag) space = false;
      }
      if (space) out += " ";
      out += tok.text;
      prev = &tok;
    }
    return out;
  }

 private:
  const rdf::PrefixMap& prefixes_;

  std::string verb(const Verb& v) {
    if (const auto* var = std::get_if<Variable>(&v)) return "?" + var->name;
    return render_path(std::get<PropertyPath>(v), prefixes_);
  }

  std::string triple(const TriplePattern& t) {
    return render_term(t.subject, prefixes_) + " " + verb(t.predicate) + " " +
           render_term(t.object, prefixes_) + " .";
  }

  std::string triples_block(const std::vector<TriplePattern>& triples, int indent) {
    if (triples.empty()) return "{ }";
    std::string out = "{";
    for (const auto& t : triples) out += "\n" + pad(indent + 1) + triple(t);
    return out + "\n" + pad(indent) + "}";
  }

  std::string inline_data(const InlineData& data, int indent) {
    std::string out = "VALUES ";
    if (data.variables.size() == 1) {
      out += "?" + data.variables.front().name + " {";
      for (const auto& row : data.rows) out += " " + render_data_value(row.front(), prefixes_);
      return out + " }";
    }
    out += "(";
    for (std::size_t i = 0; i < data.variables.size(); ++i) {
      if (i > 0) out += " ";
      out += "?" + data.variables[i].name;
    }
    out += ") {";
    if (data.rows.empty()) return out + " }";
    for (const auto& row : data.rows) {
      out += "\n" + pad(indent + 1) + "(";
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) out += " ";
        out += render_data_value(row[i], prefixes_);
      }
      out += ")";
    }
    return out + "\n" + pad(indent) + "}";
  }

  std::string pattern_element(const PatternElement& element, int indent) {
    const std::string p = pad(indent);
    return std::visit(
        [&](const auto& e) -> std::string {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, Bgp>) {
            std::string out;
            for (const auto& t : e.triples) {
              if (!out.empty()) out += "\n";
              out += p + triple(t);
            }
            return out;
          } else if constexpr (std::is_same_v<T, NestedGroup>) {
            return p + group(*e.group, indent);
          } else if constexpr (std::is_same_v<T, OptionalPattern>) {
            return p + "OPTIONAL " + group(*e.group, indent);
          } else if constexpr (std::is_same_v<T, UnionPattern>) {
            std::string out = p;
            for (std::size_t i = 0; i < e.alternatives.size(); ++i) {
              if (i > 0) out += " UNION ";
              out += group(e.alternatives[i], indent);
            }
            return out;
          } else if constexpr (std::is_same_v<T, GraphPattern>) {
            return p + "GRAPH " + render_var_or_iri(e.name, prefixes_) + " " + group(*e.group, indent);
          } else if constexpr (std::is_same_v<T, ServicePattern>) {
            return p + "SERVICE " + (e.silent ? "SILENT " : "") +
                   render_var_or_iri(e.endpoint, prefixes_) + " " + group(*e.group, indent);
          } else if constexpr (std::is_same_v<T, SubSelect>) {
            return p + "{\n" + query(*e.query, indent + 1) + "\n" + p + "}";
          } else if constexpr (std::is_same_v<T, Filter>) {
            return p + "FILTER " + expression(e.expression, indent);
          } else if constexpr (std::is_same_v<T, Bind>) {
            return p + "BIND(" + expression(e.expression, indent) + " AS ?" + e.variable.name + ")";
          } else if constexpr (std::is_same_v<T, InlineData>) {
            return p + inline_data(e, indent);
          } else if constexpr (std::is_same_v<T, MinusPattern>) {
            return p + "MINUS " + group(*e.group, indent);
          } else {
            throw SparqlError(SparqlError::Kind::NonCompliant,
                              "INCLUDE %" + e.name + " must be inlined before serialization");
          }
        },
        element);
  }
};

bool is_nary(const PropertyPath& p) {
  return p.kind == PropertyPath::Kind::Sequence || p.kind == PropertyPath::Kind::Alternative;
}

std::string negated_item(const PropertyPath::NegatedItem& item, const rdf::PrefixMap& prefixes) {
  std::string name = item.iri == rdf::vocab::kRdfType ? "a" : render_iri(item.iri, prefixes);
  return item.inverse ? "^" + name : name;
}

}  // namespace

std::string render_iri(const std::string& iri, const rdf::PrefixMap& prefixes) {
  if (auto compact = prefixes.compact(iri)) return *compact;
  return "<" + iri + ">";
}

std::string render_term(const VarOrTerm& term, const rdf::PrefixMap& prefixes) {
  return std::visit(
      [&](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, Variable>) {
          return "?" + t.name;
        } else if constexpr (std::is_same_v<T, rdf::Iri>) {
          return render_iri(t.value, prefixes);
        } else if constexpr (std::is_same_v<T, rdf::BlankNode>) {
          return "_:" + t.label;
        } else {
          return render_literal(t, prefixes);
        }
      },
      term);
}

std::string render_path(const PropertyPath& path, const rdf::PrefixMap& prefixes) {
  using Kind = PropertyPath::Kind;
  auto wrapped = [&](const PropertyPath& p, bool wrap) {
    std::string s = render_path(p, prefixes);
    return wrap ? "(" + s + ")" : s;
  };
  switch (path.kind) {
    case Kind::Link:
      return path.iri == rdf::vocab::kRdfType ? "a" : render_iri(path.iri, prefixes);
    case Kind::Inverse: {
      const auto& m = path.members.front();
      return "^" + wrapped(m, is_nary(m) || m.kind == Kind::Inverse);
    }
    case Kind::Sequence:
    case Kind::Alternative: {
      const char* sep = path.kind == Kind::Sequence ? "/" : "|";
      std::string out;
      for (std::size_t i = 0; i < path.members.size(); ++i) {
        const auto& m = path.members[i];
        if (i > 0) out += sep;
        bool wrap = path.kind == Kind::Sequence ? is_nary(m) : m.kind == Kind::Alternative;
        out += wrapped(m, wrap);
      }
      return out;
    }
    case Kind::ZeroOrMore:
    case Kind::OneOrMore:
    case Kind::ZeroOrOne: {
      const auto& m = path.members.front();
      const char* mod = path.kind == Kind::ZeroOrMore ? "*" : path.kind == Kind::OneOrMore ? "+" : "?";
      return wrapped(m, m.kind != Kind::Link && m.kind != Kind::NegatedSet) + mod;
    }
    case Kind::NegatedSet: {
      if (path.negated.size() == 1) return "!" + negated_item(path.negated.front(), prefixes);
      std::string out = "!(";
      for (std::size_t i = 0; i < path.negated.size(); ++i) {
        if (i > 0) out += "|";
        out += negated_item(path.negated[i], prefixes);
      }
      return out + ")";
    }
  }
  return {};
}

std::string render_expression(const Expression& expression, const rdf::PrefixMap& prefixes) {
  return Writer(prefixes).expression(expression, 0);
}

std::string serialize_query(const Query& query) {
  std::string out;
  if (query.prologue.base) out += "BASE <" + *query.prologue.base + ">\n";
  for (const auto& [label, ns] : query.prologue.prefixes.entries()) {
    out += "PREFIX " + label + ": <" + ns + ">\n";
  }
  if (!out.empty()) out += "\n";
  out += Writer(query.prologue.prefixes).query(query, 0);
  return out + "\n";
}

}  // namespace exemplar::sparql
