#include "exemplar/rdf/turtle.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

namespace exemplar::rdf {

TurtleError::TurtleError(Kind kind, std::string message, std::size_t line, std::size_t column,
                         std::string token)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message +
                         (token.empty() ? std::string{} : " near '" + token + "'")),
      kind_(kind),
      line_(line),
      column_(column),
      token_(std::move(token)) {}

std::vector<Triple> TrigDocument::all_triples() const {
  std::vector<Triple> out;
  for (const auto& g : graphs) out.insert(out.end(), g.triples.begin(), g.triples.end());
  return out;
}

namespace {

bool is_pn_chars_base(unsigned char c) { return std::isalpha(c) || c >= 0x80; }
bool is_pn_chars(unsigned char c) {
  return is_pn_chars_base(c) || std::isdigit(c) || c == '_' || c == '-';
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Reader {
 public:
  Reader(std::string_view text, std::optional<std::string> base, bool allow_graphs)
      : text_(text), base_(base.value_or("")), allow_graphs_(allow_graphs) {
    graphs_.push_back({});
  }

  TrigDocument run() {
    skip_ws();
    while (!at_end()) {
      statement();
      skip_ws();
    }
    TrigDocument doc;
    doc.prefixes = std::move(prefixes_);
    for (auto& g : graphs_) {
      if (!g.name && g.triples.empty() && graphs_.size() > 1) continue;
      doc.graphs.push_back(std::move(g));
    }
    if (doc.graphs.empty()) doc.graphs.push_back({});
    return doc;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::string base_;
  bool allow_graphs_;
  PrefixMap prefixes_;
  std::vector<NamedGraphBlock> graphs_;
  std::size_t current_graph_ = 0;
  std::size_t anon_counter_ = 0;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  std::string excerpt() const {
    auto end = std::min(text_.size(), pos_ + 12);
    std::string s(text_.substr(pos_, end - pos_));
    if (auto nl = s.find('\n'); nl != std::string::npos) s.resize(nl);
    return s;
  }

  [[noreturn]] void fail(const std::string& message,
                         TurtleError::Kind kind = TurtleError::Kind::Syntax) const {
    throw TurtleError(kind, message, line_, col_, excerpt());
  }

  void skip_ws() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  bool match_keyword_ci(std::string_view kw) const {
    if (pos_ + kw.size() > text_.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) != kw[i]) return false;
    }
    auto next = static_cast<unsigned char>(peek(kw.size()));
    return !(std::isalnum(next) || next == '_' || next == ':' || next == '-');
  }

  void consume(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) advance();
  }

  void emit(Term s, Iri p, Term o) {
    graphs_[current_graph_].triples.push_back({std::move(s), std::move(p), std::move(o)});
  }

  void statement() {
    if (peek() == '@') {
      if (text_.substr(pos_, 7) == "@prefix") {
        consume(7);
        prefix_directive();
        expect('.');
        return;
      }
      if (text_.substr(pos_, 5) == "@base") {
        consume(5);
        base_directive();
        expect('.');
        return;
      }
      fail("unknown directive");
    }
    if (match_keyword_ci("PREFIX")) {
      consume(6);
      prefix_directive();
      return;
    }
    if (match_keyword_ci("BASE")) {
      consume(4);
      base_directive();
      return;
    }
    if (allow_graphs_ && match_keyword_ci("GRAPH")) {
      consume(5);
      skip_ws();
      Term name = iri_term();
      graph_block(std::get<Iri>(name));
      return;
    }
    if (allow_graphs_ && peek() == '{') {
      graph_block(std::nullopt);
      return;
    }
    if (peek() == '(') fail("RDF collections are not supported", TurtleError::Kind::Unsupported);

    if (peek() == '[') {
      Term subject = blank_property_list();
      skip_ws();
      if (peek() != '.') predicate_object_list(subject);
      expect('.');
      return;
    }
    Term subject = subject_term();
    skip_ws();
    if (allow_graphs_ && peek() == '{') {
      if (!is_iri(subject)) fail("graph name must be an IRI");
      graph_block(std::get<Iri>(subject));
      return;
    }
    predicate_object_list(subject);
    expect('.');
  }

  void graph_block(std::optional<Iri> name) {
    expect('{');
    if (current_graph_ != 0) fail("nested graph blocks are not allowed");
    graphs_.push_back({std::move(name), {}});
    current_graph_ = graphs_.size() - 1;
    skip_ws();
    while (peek() != '}') {
      if (at_end()) fail("unterminated graph block");
      Term subject = peek() == '[' ? blank_property_list() : subject_term();
      skip_ws();
      if (peek() != '.' && peek() != '}') predicate_object_list(subject);
      skip_ws();
      if (peek() == '.') {
        advance();
        skip_ws();
      } else if (peek() != '}') {
        fail("expected '.' or '}'");
      }
    }
    advance();
    current_graph_ = 0;
  }

  void prefix_directive() {
    skip_ws();
    std::string label;
    while (!at_end() && peek() != ':') {
      unsigned char c = static_cast<unsigned char>(peek());
      if (!(is_pn_chars(c) || c == '.')) fail("invalid prefix label");
      label += advance();
    }
    if (at_end()) fail("expected ':' in prefix declaration");
    advance();
    skip_ws();
    if (peek() != '<') fail("expected namespace IRI");
    prefixes_.declare(std::move(label), read_iriref());
  }

  void base_directive() {
    skip_ws();
    if (peek() != '<') fail("expected base IRI");
    base_ = read_iriref();
  }

  std::string read_iriref() {
    advance();  // '<'
    std::string raw;
    while (true) {
      if (at_end()) fail("unterminated IRI");
      char c = advance();
      if (c == '>') break;
      if (c == '\\') {
        char e = at_end() ? '\0' : advance();
        if (e == 'u' || e == 'U') {
          append_utf8(raw, read_hex(e == 'u' ? 4 : 8));
        } else {
          fail("invalid escape in IRI");
        }
        continue;
      }
      if (c == ' ' || c == '\n' || c == '<' || c == '"') fail("invalid character in IRI");
      raw += c;
    }
    auto resolved = resolve_iri(base_, raw);
    if (!resolved) fail("relative IRI <" + raw + "> without a base");
    return *resolved;
  }

  std::uint32_t read_hex(int digits) {
    std::uint32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      if (at_end() || !std::isxdigit(static_cast<unsigned char>(peek()))) {
        fail("invalid unicode escape");
      }
      char h = advance();
      cp = cp * 16 + static_cast<std::uint32_t>(std::isdigit(static_cast<unsigned char>(h))
                                                    ? h - '0'
                                                    : std::tolower(h) - 'a' + 10);
    }
    return cp;
  }

  Term subject_term() {
    skip_ws();
    char c = peek();
    if (c == '_' && peek(1) == ':') return blank_label();
    if (c == '"' || c == '\'' || std::isdigit(static_cast<unsigned char>(c))) {
      fail("literal cannot be a subject");
    }
    return iri_term();
  }

  Term iri_term() {
    skip_ws();
    if (peek() == '<') return Iri{read_iriref()};
    return Iri{prefixed_name()};
  }

  std::string prefixed_name() {
    const std::size_t start_line = line_, start_col = col_;
    std::string label;
    if (!at_end() && is_pn_chars_base(static_cast<unsigned char>(peek()))) {
      while (!at_end()) {
        unsigned char c = static_cast<unsigned char>(peek());
        if (is_pn_chars(c) || (c == '.' && is_pn_chars(static_cast<unsigned char>(peek(1))))) {
          label += advance();
        } else {
          break;
        }
      }
    }
    if (peek() != ':') {
      if (label.empty()) fail("unexpected character");
      fail("expected prefixed name");
    }
    advance();
    std::string local = local_name();
    auto ns = prefixes_.find(label);
    if (!ns) {
      throw TurtleError(TurtleError::Kind::UndeclaredPrefix, "undeclared prefix '" + label + ":'",
                        start_line, start_col, label + ":" + local);
    }
    return *ns + local;
  }

  std::string local_name() {
    std::string local;
    while (!at_end()) {
      unsigned char c = static_cast<unsigned char>(peek());
      if (is_pn_chars(c) || c == ':') {
        local += advance();
      } else if (c == '.') {
        unsigned char n = static_cast<unsigned char>(peek(1));
        if (is_pn_chars(n) || n == ':' || n == '%' || n == '\\') {
          local += advance();
        } else {
          break;
        }
      } else if (c == '%') {
        local += advance();
        for (int i = 0; i < 2; ++i) {
          if (!std::isxdigit(static_cast<unsigned char>(peek()))) fail("invalid percent escape");
          local += advance();
        }
      } else if (c == '\\') {
        advance();
        if (at_end()) fail("dangling escape in local name");
        local += advance();
      } else {
        break;
      }
    }
    return local;
  }

  Term blank_label() {
    consume(2);
    std::string label;
    while (!at_end()) {
      unsigned char c = static_cast<unsigned char>(peek());
      if (is_pn_chars(c) || (c == '.' && is_pn_chars(static_cast<unsigned char>(peek(1))))) {
        label += advance();
      } else {
        break;
      }
    }
    if (label.empty()) fail("empty blank node label");
    return BlankNode{label};
  }

  Term fresh_blank() { return BlankNode{"#" + std::to_string(anon_counter_++)}; }

  Term blank_property_list() {
    advance();  // '['
    Term node = fresh_blank();
    skip_ws();
    if (peek() != ']') predicate_object_list(node);
    expect(']');
    return node;
  }

  void predicate_object_list(const Term& subject) {
    while (true) {
      skip_ws();
      Iri predicate = verb();
      object_list(subject, predicate);
      skip_ws();
      if (peek() != ';') return;
      while (peek() == ';') {
        advance();
        skip_ws();
      }
      if (peek() == '.' || peek() == ']' || peek() == '}') return;
    }
  }

  Iri verb() {
    skip_ws();
    if (peek() == 'a') {
      unsigned char n = static_cast<unsigned char>(peek(1));
      if (!(is_pn_chars(n) || n == ':' || n == '.')) {
        advance();
        return Iri{vocab::kRdfType};
      }
    }
    if (peek() == '_' || peek() == '"' || peek() == '[') fail("predicate must be an IRI");
    return std::get<Iri>(iri_term());
  }

  void object_list(const Term& subject, const Iri& predicate) {
    while (true) {
      Term o = object();
      emit(subject, predicate, std::move(o));
      skip_ws();
      if (peek() != ',') return;
      advance();
    }
  }

  Term object() {
    skip_ws();
    char c = peek();
    if (c == '(') fail("RDF collections are not supported", TurtleError::Kind::Unsupported);
    if (c == '[') return blank_property_list();
    if (c == '_' && peek(1) == ':') return blank_label();
    if (c == '<') return Iri{read_iriref()};
    if (c == '"' || c == '\'') return string_literal();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      return numeric_literal();
    }
    if (text_.substr(pos_, 4) == "true" && !is_pn_chars(static_cast<unsigned char>(peek(4))) &&
        peek(4) != ':') {
      consume(4);
      return Literal::typed("true", vocab::kXsdBoolean);
    }
    if (text_.substr(pos_, 5) == "false" && !is_pn_chars(static_cast<unsigned char>(peek(5))) &&
        peek(5) != ':') {
      consume(5);
      return Literal::typed("false", vocab::kXsdBoolean);
    }
    return Iri{prefixed_name()};
  }

  Term numeric_literal() {
    std::string lex;
    if (peek() == '+' || peek() == '-') lex += advance();
    bool digits_before = false, has_dot = false, has_exp = false;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      lex += advance();
      digits_before = true;
    }
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      has_dot = true;
      lex += advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) lex += advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      has_exp = true;
      lex += advance();
      if (peek() == '+' || peek() == '-') lex += advance();
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("malformed exponent");
      while (std::isdigit(static_cast<unsigned char>(peek()))) lex += advance();
    }
    if (!digits_before && !has_dot) fail("malformed number");
    if (has_exp) return Literal::typed(lex, vocab::kXsdDouble);
    if (has_dot) return Literal::typed(lex, vocab::kXsdDecimal);
    return Literal::typed(lex, vocab::kXsdInteger);
  }

  Term string_literal() {
    const char quote = peek();
    const bool long_form = peek(1) == quote && peek(2) == quote;
    consume(long_form ? 3 : 1);
    std::string value;
    while (true) {
      if (at_end()) fail("unterminated string literal");
      char c = peek();
      if (long_form) {
        if (c == quote && peek(1) == quote && peek(2) == quote) {
          consume(3);
          break;
        }
      } else {
        if (c == quote) {
          advance();
          break;
        }
        if (c == '\n' || c == '\r') fail("newline in short string literal");
      }
      advance();
      if (c == '\\') {
        if (at_end()) fail("unterminated escape");
        char e = advance();
        switch (e) {
          case 't': value += '\t'; break;
          case 'b': value += '\b'; break;
          case 'n': value += '\n'; break;
          case 'r': value += '\r'; break;
          case 'f': value += '\f'; break;
          case '"': value += '"'; break;
          case '\'': value += '\''; break;
          case '\\': value += '\\'; break;
          case 'u': append_utf8(value, read_hex(4)); break;
          case 'U': append_utf8(value, read_hex(8)); break;
          default: fail(std::string("invalid escape '\\") + e + "'");
        }
      } else {
        value += c;
      }
    }
    if (peek() == '@') {
      advance();
      std::string lang;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-') lang += advance();
      if (lang.empty() || !std::isalpha(static_cast<unsigned char>(lang[0]))) {
        fail("malformed language tag");
      }
      return Literal::tagged(std::move(value), std::move(lang));
    }
    if (peek() == '^' && peek(1) == '^') {
      consume(2);
      Term dt = iri_term();
      return Literal::typed(std::move(value), std::get<Iri>(dt).value);
    }
    return Literal::plain(std::move(value));
  }
};

// ---------------------------------------------------------------------------
// Writer

std::string escape_iri(std::string_view iri) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char ch : iri) {
    auto c = static_cast<unsigned char>(ch);
    if (c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
        c == '^' || c == '`' || c == '\\') {
      out += "\\u00";
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    } else {
      out += ch;
    }
  }
  return out;
}

std::string quote_short(std::string_view s) {
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

// Inside """...""" a quote may stay raw unless it is followed by another
// quote or ends the content.
std::string quote_long(std::string_view s) {
  std::string out = "\"\"\"";
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '\\') {
      out += "\\\\";
    } else if (c == '\r') {
      out += "\\r";
    } else if (c == '"') {
      bool escape = i + 1 == s.size() || s[i + 1] == '"';
      out += escape ? "\\\"" : "\"";
    } else {
      out += c;
    }
  }
  return out + "\"\"\"";
}

class Writer {
 public:
  explicit Writer(const PrefixMap& prefixes) : prefixes_(prefixes) {}

  std::string iri(const std::string& value) const {
    if (auto c = prefixes_.compact(value)) return *c;
    return "<" + escape_iri(value) + ">";
  }

  std::string term(const Term& t) {
    if (const auto* i = std::get_if<Iri>(&t)) return iri(i->value);
    if (const auto* b = std::get_if<BlankNode>(&t)) {
      auto [it, inserted] = blank_names_.try_emplace(b->label, "");
      if (inserted) it->second = "b" + std::to_string(blank_names_.size() - 1);
      return "_:" + it->second;
    }
    const auto& lit = std::get<Literal>(t);
    std::string out = lit.lexical.find('\n') != std::string::npos ? quote_long(lit.lexical)
                                                                  : quote_short(lit.lexical);
    if (lit.has_language()) return out + "@" + lit.language;
    if (lit.datatype != vocab::kXsdString) out += "^^" + iri(lit.datatype);
    return out;
  }

  std::string predicate(const Iri& p) const {
    return p.value == vocab::kRdfType ? "a" : iri(p.value);
  }

 private:
  const PrefixMap& prefixes_;
  std::map<std::string, std::string> blank_names_;
};

}  // namespace

TurtleDocument parse_turtle(std::string_view text, std::optional<std::string> base) {
  Reader reader(text, std::move(base), false);
  TrigDocument doc = reader.run();
  return {doc.all_triples(), std::move(doc.prefixes)};
}

TrigDocument parse_trig(std::string_view text, std::optional<std::string> base) {
  Reader reader(text, std::move(base), true);
  return reader.run();
}

std::string serialize_turtle(std::span<const Triple> triples, const PrefixMap& prefixes,
                             const std::optional<std::string>& graph) {
  std::string out;
  for (const auto& [label, ns] : prefixes.entries()) {
    out += "@prefix " + label + ": <" + escape_iri(ns) + "> .\n";
  }
  if (triples.empty() && !graph) return out;
  if (!out.empty()) out += "\n";

  Writer writer(prefixes);
  // Subjects in first-encounter order; predicates grouped per subject.
  std::vector<const Term*> subjects;
  std::map<Term, std::vector<std::pair<Iri, std::vector<const Term*>>>> grouped;
  for (const auto& t : triples) {
    auto [it, inserted] = grouped.try_emplace(t.subject);
    if (inserted) subjects.push_back(&t.subject);
    auto& preds = it->second;
    auto pit = std::find_if(preds.begin(), preds.end(),
                            [&](const auto& entry) { return entry.first == t.predicate; });
    if (pit == preds.end()) {
      preds.push_back({t.predicate, {}});
      pit = std::prev(preds.end());
    }
    pit->second.push_back(&t.object);
  }

  const std::string indent = graph ? "  " : "";
  if (graph) out += writer.iri(*graph) + " {\n";
  for (const Term* subject : subjects) {
    out += indent + writer.term(*subject);
    const auto& preds = grouped.at(*subject);
    for (std::size_t i = 0; i < preds.size(); ++i) {
      out += i == 0 ? " " : " ;\n" + indent + "    ";
      out += writer.predicate(preds[i].first) + " ";
      const auto& objects = preds[i].second;
      for (std::size_t k = 0; k < objects.size(); ++k) {
        if (k > 0) out += ", ";
        out += writer.term(*objects[k]);
      }
    }
    out += " .\n";
  }
  if (graph) out += "}\n";
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism

namespace {

using TripleSet = std::set<Triple>;

std::vector<std::string> blank_labels(const TripleSet& ts) {
  std::set<std::string> labels;
  for (const auto& t : ts) {
    if (const auto* b = std::get_if<BlankNode>(&t.subject)) labels.insert(b->label);
    if (const auto* b = std::get_if<BlankNode>(&t.object)) labels.insert(b->label);
  }
  return {labels.begin(), labels.end()};
}

// Iterative colour refinement: a blank node's colour summarises its
// neighbourhood with ground terms kept verbatim.
std::unordered_map<std::string, std::size_t> colours(const TripleSet& ts) {
  std::unordered_map<std::string, std::size_t> colour;
  for (const auto& l : blank_labels(ts)) colour[l] = 0;
  auto term_key = [&](const Term& t) -> std::string {
    if (const auto* b = std::get_if<BlankNode>(&t)) return "_" + std::to_string(colour.at(b->label));
    return to_string(t);
  };
  for (int round = 0; round < 4; ++round) {
    std::unordered_map<std::string, std::multiset<std::string>> sig;
    for (const auto& t : ts) {
      if (const auto* b = std::get_if<BlankNode>(&t.subject)) {
        sig[b->label].insert("s|" + t.predicate.value + "|" + term_key(t.object));
      }
      if (const auto* b = std::get_if<BlankNode>(&t.object)) {
        sig[b->label].insert("o|" + t.predicate.value + "|" + term_key(t.subject));
      }
    }
    std::unordered_map<std::string, std::size_t> next;
    for (auto& [label, parts] : sig) {
      std::string joined;
      for (const auto& p : parts) joined += p + "\n";
      next[label] = std::hash<std::string>{}(joined);
    }
    colour = std::move(next);
  }
  return colour;
}

}  // namespace

bool isomorphic(std::span<const Triple> a_span, std::span<const Triple> b_span) {
  const TripleSet a(a_span.begin(), a_span.end());
  const TripleSet b(b_span.begin(), b_span.end());
  if (a.size() != b.size()) return false;
  const auto a_blanks = blank_labels(a);
  const auto b_blanks = blank_labels(b);
  if (a_blanks.size() != b_blanks.size()) return false;

  auto ca = colours(a);
  auto cb = colours(b);
  std::map<std::size_t, std::vector<std::string>> b_by_colour;
  for (const auto& l : b_blanks) b_by_colour[cb.at(l)].push_back(l);

  std::map<std::string, std::string> mapping;
  std::set<std::string> used;

  auto map_term = [&](const Term& t) -> std::optional<Term> {
    if (const auto* bn = std::get_if<BlankNode>(&t)) {
      auto it = mapping.find(bn->label);
      if (it == mapping.end()) return std::nullopt;
      return BlankNode{it->second};
    }
    return t;
  };
  auto consistent = [&]() {
    for (const auto& t : a) {
      auto s = map_term(t.subject);
      auto o = map_term(t.object);
      if (s && o && !b.contains(Triple{*s, t.predicate, *o})) return false;
    }
    return true;
  };

  std::function<bool(std::size_t)> search = [&](std::size_t i) -> bool {
    if (i == a_blanks.size()) return consistent();
    const auto& label = a_blanks[i];
    auto it = b_by_colour.find(ca.at(label));
    if (it == b_by_colour.end()) return false;
    for (const auto& candidate : it->second) {
      if (used.contains(candidate)) continue;
      mapping[label] = candidate;
      used.insert(candidate);
      if (consistent() && search(i + 1)) return true;
      used.erase(candidate);
      mapping.erase(label);
    }
    return false;
  };
  return search(0);
}

}  // namespace exemplar::rdf
