#include "exemplar/fixer/fix.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "exemplar/sparql/analysis.hpp"
#include "exemplar/sparql/parser.hpp"
#include "exemplar/sparql/serializer.hpp"

namespace exemplar::fixer {

std::vector<std::string> default_hint_namespaces() {
  return {std::string(kBlazegraphHints), std::string(kNeptuneHints)};
}

std::string_view to_string(FixKind kind) {
  switch (kind) {
    case FixKind::NamedSubquery: return "NamedSubquery";
    case FixKind::HintTriples: return "HintTriples";
    case FixKind::PrefixInjection: return "PrefixInjection";
  }
  return "?";
}

const AppliedFix* FixReport::find(FixKind kind) const {
  for (const auto& a : applied) {
    if (a.fix == kind) return &a;
  }
  return nullptr;
}

void FixReport::merge(const FixReport& other) {
  applied.insert(applied.end(), other.applied.begin(), other.applied.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
  unresolved_prefixes.insert(unresolved_prefixes.end(), other.unresolved_prefixes.begin(),
                             other.unresolved_prefixes.end());
}

namespace {

using sparql::Token;
using sparql::TokenKind;

struct Declaration {
  std::size_t begin = 0;  // offset of WITH
  std::size_t end = 0;    // end of the %name token
  std::size_t body_begin = 0;
  std::size_t body_end = 0;
};

struct Include {
  std::string name;
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

class NamedSubqueryRewriter {
 public:
  explicit NamedSubqueryRewriter(std::string_view text) : text_(text), tokens_(sparql::tokenize(text)) {
    scan();
  }

  std::pair<std::string, FixReport> run() {
    FixReport report;
    if (declarations_.empty() && includes_.empty()) return {std::string(text_), report};

    std::map<std::string, std::size_t> uses;
    for (const auto& inc : includes_) {
      if (!declarations_.contains(inc.name)) {
        throw FixError("INCLUDE %" + inc.name + " refers to an undeclared named subquery");
      }
    }
    std::string out = splice(0, text_.size(), uses);
    for (const auto& [name, decl] : declarations_) {
      if (!uses.contains(name)) {
        report.warnings.push_back("named subquery %" + name + " is never included; declaration dropped");
      }
    }
    std::size_t sites = 0;
    std::string detail;
    for (const auto& [name, n] : uses) {
      sites += n;
      if (!detail.empty()) detail += ", ";
      detail += "%" + name + " x" + std::to_string(n);
    }
    report.applied.push_back({FixKind::NamedSubquery, "inlined " + detail, sites});
    if (sites == 0) report.applied.back().detail = "dropped unused declarations";
    return {tidy(out), report};
  }

 private:
  std::string_view text_;
  std::vector<Token> tokens_;
  std::map<std::string, Declaration> declarations_;
  std::vector<Include> includes_;
  std::set<std::string> expanding_;

  void scan() {
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      const Token& t = tokens_[i];
      if (t.is_keyword("INCLUDE") && i + 1 < tokens_.size() &&
          tokens_[i + 1].kind == TokenKind::NamedSubqueryRef) {
        includes_.push_back({tokens_[i + 1].lexeme.substr(1), t.offset, tokens_[i + 1].end_offset()});
        ++i;
        continue;
      }
      if (!t.is_keyword("WITH") || i + 1 >= tokens_.size() || !tokens_[i + 1].is_punct("{")) continue;
      std::size_t depth = 0, j = i + 1;
      for (; j < tokens_.size(); ++j) {
        if (tokens_[j].is_punct("{")) ++depth;
        if (tokens_[j].is_punct("}") && --depth == 0) break;
      }
      if (j + 2 >= tokens_.size() || !tokens_[j + 1].is_keyword("AS") ||
          tokens_[j + 2].kind != TokenKind::NamedSubqueryRef) {
        throw FixError("malformed WITH { ... } AS %name block at line " + std::to_string(t.line));
      }
      std::string name = tokens_[j + 2].lexeme.substr(1);
      if (declarations_.contains(name)) throw FixError("named subquery %" + name + " declared twice");
      declarations_[name] = {t.offset, tokens_[j + 2].end_offset(), tokens_[i + 1].end_offset(),
                             tokens_[j].offset};
      // keep scanning inside the body for INCLUDEs of other declarations
    }
  }

  // Copies text_[begin, end) with declarations removed and includes expanded.
  std::string splice(std::size_t begin, std::size_t end, std::map<std::string, std::size_t>& uses) {
    struct Edit {
      std::size_t begin, end;
      const Include* include;
    };
    std::vector<Edit> edits;
    for (const auto& [name, d] : declarations_) {
      if (d.begin >= begin && d.end <= end) edits.push_back({d.begin, d.end, nullptr});
    }
    for (const auto& inc : includes_) {
      if (inc.begin >= begin && inc.end <= end) edits.push_back({inc.begin, inc.end, &inc});
    }
    std::sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) { return a.begin < b.begin; });

    std::string out;
    std::size_t pos = begin;
    for (const auto& e : edits) {
      if (e.begin < pos) continue;  // nested inside a removed declaration
      out.append(text_.substr(pos, e.begin - pos));
      if (e.include != nullptr) {
        const std::string& name = e.include->name;
        if (expanding_.contains(name)) throw FixError("named subquery %" + name + " includes itself");
        expanding_.insert(name);
        const auto& d = declarations_.at(name);
        out += "{ " + trim(splice(d.body_begin, d.body_end, uses)) + " }";
        expanding_.erase(name);
        ++uses[name];
      }
      pos = e.end;
    }
    out.append(text_.substr(pos, end - pos));
    return out;
  }

  // Drops lines that became blank because a declaration was removed.
  static std::string tidy(const std::string& s) {
    std::string out;
    std::size_t start = 0;
    bool previous_blank = false;
    while (start <= s.size()) {
      auto nl = s.find('\n', start);
      std::string line = s.substr(start, nl == std::string::npos ? std::string::npos : nl - start);
      bool blank = trim(line).empty();
      auto last = line.find_last_not_of(" \t");
      line = last == std::string::npos ? std::string() : line.substr(0, last + 1);
      if (!(blank && previous_blank)) {
        out += line;
        if (nl != std::string::npos) out += "\n";
      }
      previous_blank = blank;
      if (nl == std::string::npos) break;
      start = nl + 1;
    }
    return out;
  }
};

bool in_namespace(const std::string& iri, const std::vector<std::string>& namespaces) {
  return std::any_of(namespaces.begin(), namespaces.end(),
                     [&](const std::string& ns) { return !ns.empty() && iri.starts_with(ns); });
}

bool is_hint(const sparql::TriplePattern& t, const std::vector<std::string>& namespaces) {
  if (const auto* s = std::get_if<rdf::Iri>(&t.subject); s && in_namespace(s->value, namespaces)) {
    return true;
  }
  if (const auto* p = std::get_if<sparql::PropertyPath>(&t.predicate);
      p && p->is_link() && in_namespace(p->iri, namespaces)) {
    return true;
  }
  return false;
}

bool undeclared_prefix_failure(std::string_view text, std::string& error) {
  try {
    sparql::parse_query(text, sparql::Dialect::Strict);
    return false;
  } catch (const sparql::SparqlError& e) {
    error = e.what();
    return e.kind() == sparql::SparqlError::Kind::UndeclaredPrefix;
  }
}

}  // namespace

std::pair<std::string, FixReport> rewrite_named_subqueries(std::string_view text) {
  try {
    return NamedSubqueryRewriter(text).run();
  } catch (const sparql::SparqlError& e) {
    throw FixError(std::string("cannot tokenize query: ") + e.what());
  }
}

std::pair<sparql::Query, FixReport> strip_query_hints(const sparql::Query& query,
                                                      const std::vector<std::string>& hint_namespaces) {
  sparql::Query out = query;
  FixReport report;
  std::size_t removed = 0, emptied = 0;
  sparql::for_each_group(out, [&](sparql::GroupPattern& g) {
    if (g.empty()) return;
    std::size_t before = removed;
    for (auto& element : g.elements) {
      auto* bgp = std::get_if<sparql::Bgp>(&element);
      if (bgp == nullptr) continue;
      auto keep = std::remove_if(bgp->triples.begin(), bgp->triples.end(),
                                 [&](const sparql::TriplePattern& t) { return is_hint(t, hint_namespaces); });
      removed += static_cast<std::size_t>(bgp->triples.end() - keep);
      bgp->triples.erase(keep, bgp->triples.end());
    }
    if (removed == before) return;
    std::erase_if(g.elements, [](const sparql::PatternElement& e) {
      const auto* bgp = std::get_if<sparql::Bgp>(&e);
      return bgp != nullptr && bgp->triples.empty();
    });
    if (g.empty()) ++emptied;
  });
  if (removed > 0) {
    report.applied.push_back({FixKind::HintTriples,
                              "removed " + std::to_string(removed) + " query hint triple(s)", removed});
  }
  if (emptied > 0) {
    report.warnings.push_back(std::to_string(emptied) +
                              " group(s) contained only query hints and are now empty");
  }
  return {std::move(out), report};
}

std::pair<std::string, FixReport> inject_prefixes(std::string_view text, const rdf::PrefixMap& registry) {
  FixReport report;
  sparql::PrefixUsage usage = sparql::used_prefixes(text);
  std::string header, labels;
  std::size_t count = 0;
  for (const auto& label : usage.undeclared()) {  // std::set: sorted
    auto ns = registry.find(label);
    if (!ns) {
      report.unresolved_prefixes.push_back(label);
      continue;
    }
    header += "PREFIX " + label + ": <" + *ns + ">\n";
    labels += (labels.empty() ? "" : ", ") + label;
    ++count;
  }
  if (count == 0) return {std::string(text), report};
  report.applied.push_back({FixKind::PrefixInjection, "added " + labels, count});
  return {header + std::string(text), report};
}

std::pair<std::string, FixReport> fix_all(std::string_view text, const rdf::PrefixMap& registry,
                                          const std::vector<std::string>& hint_namespaces) {
  FixReport report;
  auto [current, named] = rewrite_named_subqueries(text);
  report.merge(named);

  std::string error;
  if (undeclared_prefix_failure(current, error)) {
    auto [injected, prefix_report] = inject_prefixes(current, registry);
    report.merge(prefix_report);
    current = std::move(injected);
  }

  sparql::Query ast;
  try {
    ast = sparql::parse_query(current, sparql::Dialect::Strict);
  } catch (const sparql::SparqlError& e) {
    throw FixError(std::string("query still does not parse after fixes: ") + e.what());
  }

  auto [stripped, hint_report] = strip_query_hints(ast, hint_namespaces);
  report.merge(hint_report);
  if (hint_report.changed()) {
    current = sparql::serialize_query(stripped);
    try {
      sparql::parse_query(current, sparql::Dialect::Strict);
    } catch (const sparql::SparqlError& e) {
      throw FixError(std::string("serialized query does not parse: ") + e.what());
    }
  }
  if (!report.changed()) return {std::string(text), report};
  return {current, report};
}

}  // namespace exemplar::fixer
