#include "exemplar/viz/graph.hpp"

#include <cctype>
#include <map>
#include <set>

#include "exemplar/sparql/analysis.hpp"
#include "exemplar/sparql/parser.hpp"
#include "exemplar/sparql/serializer.hpp"

namespace exemplar::viz {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Variable: return "variable";
    case NodeKind::Iri: return "iri";
    case NodeKind::Literal: return "literal";
    case NodeKind::Blank: return "blank";
    case NodeKind::PathIntermediate: return "path_intermediate";
  }
  return "?";
}

const Node* QueryGraph::node(std::string_view id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

namespace {

std::string sanitize(std::string_view s) {
  std::string out;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    out += (std::isalnum(u) && u < 0x80) || c == '_' ? c : '_';
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += sep;
    out += p;
  }
  return out;
}

class Builder {
 public:
  explicit Builder(const sparql::Query& query) : query_(query), prefixes_(query.prologue.prefixes) {
    for (const auto& v : sparql::projected_variables(query)) projected_.insert(v);
  }

  QueryGraph run() {
    for (const auto& sp : sparql::extract_triple_patterns(query_, sparql::PatternScope::AllGroups)) {
      pattern(sp);
    }
    sparql::Query copy = query_;
    sparql::for_each_group(copy, [&](sparql::GroupPattern& g) {
      for (const auto& element : g.elements) {
        if (const auto* f = std::get_if<sparql::Filter>(&element)) {
          graph_.annotations.push_back("FILTER " + sparql::render_expression(f->expression, prefixes_));
        } else if (const auto* b = std::get_if<sparql::Bind>(&element)) {
          graph_.annotations.push_back("BIND(" + sparql::render_expression(b->expression, prefixes_) +
                                       " AS ?" + b->variable.name + ")");
        }
      }
    });
    return std::move(graph_);
  }

 private:
  const sparql::Query& query_;
  const rdf::PrefixMap& prefixes_;
  std::set<std::string> projected_;
  QueryGraph graph_;
  std::map<std::string, std::string> ids_by_key_;
  std::set<std::string> used_ids_;
  std::size_t intermediates_ = 0;

  std::string claim(std::string base) {
    std::string id = base;
    for (int n = 2; used_ids_.contains(id); ++n) id = base + "_" + std::to_string(n);
    used_ids_.insert(id);
    return id;
  }

  std::string node_for(const sparql::VarOrTerm& term) {
    std::string key, base, label;
    NodeKind kind = NodeKind::Variable;
    bool projected = false;
    if (const auto* v = std::get_if<sparql::Variable>(&term)) {
      key = "?" + v->name;
      base = "v_" + sanitize(v->name);
      label = "?" + v->name;
      projected = projected_.contains(v->name);
    } else if (const auto* iri = std::get_if<rdf::Iri>(&term)) {
      kind = NodeKind::Iri;
      key = "<" + iri->value + ">";
      label = sparql::render_iri(iri->value, prefixes_);
      base = "n_" + sanitize(label.front() == '<' ? iri->value : label);
    } else if (const auto* b = std::get_if<rdf::BlankNode>(&term)) {
      kind = NodeKind::Blank;
      key = "_:" + b->label;
      base = "b_" + sanitize(b->label);
      label = "";
    } else {
      kind = NodeKind::Literal;
      label = sparql::render_term(term, prefixes_);
      key = "L" + label;
      base = "l_" + sanitize(std::get<rdf::Literal>(term).lexical);
    }
    if (auto it = ids_by_key_.find(key); it != ids_by_key_.end()) return it->second;
    std::string id = claim(base);
    ids_by_key_.emplace(key, id);
    graph_.nodes.push_back({id, kind, label, projected});
    return id;
  }

  std::string intermediate() {
    std::string id = claim("p_" + std::to_string(++intermediates_));
    graph_.nodes.push_back({id, NodeKind::PathIntermediate, "", false});
    return id;
  }

  void edge(const std::string& from, const std::string& to, std::string label,
            const std::string& context) {
    graph_.edges.push_back({from, to, std::move(label), graph_.edges.size() + 1, context});
  }

  void step(const sparql::PropertyPath& path, const std::string& from, const std::string& to,
            const std::string& context) {
    if (path.kind == sparql::PropertyPath::Kind::Inverse && path.members.front().is_link()) {
      edge(to, from, sparql::render_path(path.members.front(), prefixes_), context);
    } else {
      edge(from, to, sparql::render_path(path, prefixes_), context);
    }
  }

  void pattern(const sparql::ScopedPattern& sp) {
    const auto& t = sp.pattern;
    const std::string context = join(sp.context, "/");
    std::string subject = node_for(t.subject);
    std::string object = node_for(t.object);
    if (const auto* v = std::get_if<sparql::Variable>(&t.predicate)) {
      edge(subject, object, "?" + v->name, context);
      return;
    }
    const auto& path = std::get<sparql::PropertyPath>(t.predicate);
    if (path.kind != sparql::PropertyPath::Kind::Sequence) {
      step(path, subject, object, context);
      return;
    }
    std::string from = subject;
    for (std::size_t i = 0; i < path.members.size(); ++i) {
      std::string to = i + 1 == path.members.size() ? object : intermediate();
      step(path.members[i], from, to, context);
      from = to;
    }
  }
};

std::string escape_label(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "#quot;"; break;
      case '<': out += "#lt;"; break;
      case '>': out += "#gt;"; break;
      case '\n': out += " "; break;
      default: out += c;
    }
  }
  return out;
}

bool dashed(const std::string& context) {
  return context.find("Optional") != std::string::npos ||
         context.find("Service(") != std::string::npos;
}

std::string single_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

QueryGraph build_query_graph(const sparql::Query& query) { return Builder(query).run(); }

std::string emit_mermaid(const QueryGraph& graph) {
  std::string out = "graph TD\n";
  for (const auto& n : graph.nodes) {
    out += "  " + n.id;
    switch (n.kind) {
      case NodeKind::Variable:
      case NodeKind::Literal: out += "[\"" + escape_label(n.label) + "\"]"; break;
      case NodeKind::Iri: out += "(\"" + escape_label(n.label) + "\")"; break;
      case NodeKind::Blank: out += "((\"[]\"))"; break;
      case NodeKind::PathIntermediate: out += "((\" \"))"; break;
    }
    out += "\n";
  }
  for (const auto& e : graph.edges) {
    out += "  " + e.from + " -- \"(" + std::to_string(e.index) + ") " + escape_label(e.label) +
           "\" --> " + e.to + "\n";
  }
  std::vector<std::string> projected;
  for (const auto& n : graph.nodes) {
    if (n.projected) projected.push_back(n.id);
  }
  if (!projected.empty()) {
    out += "  classDef projected fill:#c8e6c9,stroke:#2e7d32,stroke-width:2px\n";
    out += "  class " + join(projected, ",") + " projected\n";
  }
  std::vector<std::string> dashed_edges;
  for (const auto& e : graph.edges) {
    if (dashed(e.context)) dashed_edges.push_back(std::to_string(e.index - 1));
  }
  if (!dashed_edges.empty()) {
    out += "  linkStyle " + join(dashed_edges, ",") + " stroke-dasharray:5 5\n";
  }
  return out;
}

std::string emit_markdown_page(const store::QueryExample& example, const rdf::PrefixMap& registry) {
  auto questions = example.questions_for_display();
  std::string title = questions.empty() ? example.id : single_line(questions.front().text);
  std::string out = "# " + title + "\n\n";
  if (questions.size() > 1) {
    for (std::size_t i = 1; i < questions.size(); ++i) {
      const auto& q = questions[i];
      out += "- " + (q.lang.empty() ? std::string() : "(" + q.lang + ") ") + single_line(q.text) + "\n";
    }
    out += "\n";
  }
  if (!example.id.empty()) out += "Id: `" + example.id + "`\n\n";
  out += "Type: " + std::string(store::to_string(example.query_type)) + "\n\n";
  if (!example.targets.empty()) {
    out += "Endpoints:";
    for (const auto& t : example.targets) out += " [" + t + "](" + t + ")";
    out += "\n\n";
  }
  if (!example.keywords.empty()) {
    out += "Keywords:";
    for (std::size_t i = 0; i < example.keywords.size(); ++i) {
      out += (i == 0 ? " `" : ", `") + example.keywords[i] + "`";
    }
    out += "\n\n";
  }
  try {
    auto ast = sparql::parse_query(
        example.query_text, store::parse_options_for(example, registry, sparql::Dialect::Strict));
    auto graph = build_query_graph(ast);
    out += "```mermaid\n" + emit_mermaid(graph) + "```\n\n";
    if (!graph.annotations.empty()) {
      for (const auto& a : graph.annotations) out += "- `" + single_line(a) + "`\n";
      out += "\n";
    }
  } catch (const sparql::SparqlError& e) {
    out += "> diagram unavailable: " + single_line(e.what()) + "\n\n";
  }
  std::string query = example.query_text;
  if (!query.empty() && query.back() != '\n') query += "\n";
  out += "```sparql\n" + query + "```\n";
  return out;
}

}  // namespace exemplar::viz
