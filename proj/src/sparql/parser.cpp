#include "exemplar/sparql/parser.hpp"

#include <charconv>
#include <set>

namespace exemplar::sparql {

std::string_view to_string(QueryForm form) {
  switch (form) {
    case QueryForm::Select: return "Select";
    case QueryForm::Ask: return "Ask";
    case QueryForm::Construct: return "Construct";
    case QueryForm::Describe: return "Describe";
  }
  return "?";
}

std::vector<std::string> Expression::variables() const {
  std::vector<std::string> out;
  for (const auto& item : items) {
    const auto* tok = std::get_if<ExprToken>(&item);
    if (tok == nullptr || tok->kind != TokenKind::Variable) continue;
    std::string name = tok->text.substr(1);
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(std::move(name));
  }
  return out;
}

namespace {

const std::set<std::string_view> kClauseKeywords = {"HAVING", "ORDER", "LIMIT", "OFFSET",
                                                    "VALUES", "GROUP"};

class Parser {
 public:
  Parser(std::vector<Token> tokens, const ParseOptions& options)
      : tokens_(std::move(tokens)), options_(options) {
    for (const auto& t : tokens_) {
      if (t.kind == TokenKind::BlankNode) user_blank_labels_.insert(t.lexeme.substr(2));
    }
  }

  Query parse() {
    Query q;
    prologue_ = &q.prologue;
    parse_prologue(q.prologue);
    if (at_end()) {
      throw SparqlError(SparqlError::Kind::UnknownForm, "missing query form", last_line(),
                        last_column());
    }
    const Token& t = *peek();
    if (t.is_keyword("SELECT")) {
      parse_select(q, true);
    } else if (t.is_keyword("ASK")) {
      parse_ask(q);
    } else if (t.is_keyword("CONSTRUCT")) {
      parse_construct(q);
    } else if (t.is_keyword("DESCRIBE")) {
      parse_describe(q);
    } else {
      throw SparqlError(SparqlError::Kind::UnknownForm, "unknown query form '" + t.lexeme + "'",
                        t.line, t.column, t.lexeme);
    }
    if (!at_end()) fail("unexpected token after end of query");
    for (const Token* ref : includes_) {
      const auto name = ref->lexeme.substr(1);
      bool known = false;
      for (const auto& n : q.named_subqueries) known = known || n.name == name;
      if (!known) {
        throw SparqlError(SparqlError::Kind::Syntax, "INCLUDE of undefined " + ref->lexeme, ref->line,
                          ref->column, ref->lexeme);
      }
    }
    return q;
  }

 private:
  std::vector<Token> tokens_;
  const ParseOptions& options_;
  std::vector<const Token*> includes_;
  std::size_t pos_ = 0;
  Prologue* prologue_ = nullptr;
  std::set<std::string> user_blank_labels_;
  std::size_t anon_counter_ = 0;

  // -- token access ---------------------------------------------------------

  bool at_end() const { return pos_ >= tokens_.size(); }
  const Token* peek(std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() ? &tokens_[pos_ + ahead] : nullptr;
  }
  const Token& next() {
    if (at_end()) fail("unexpected end of query");
    return tokens_[pos_++];
  }
  std::size_t last_line() const { return tokens_.empty() ? 1 : tokens_.back().line; }
  std::size_t last_column() const { return tokens_.empty() ? 1 : tokens_.back().column; }

  [[noreturn]] void fail_non_compliant(const std::string& message) const {
    const Token* t = peek();
    throw SparqlError(SparqlError::Kind::NonCompliant, message, t ? t->line : last_line(),
                      t ? t->column : last_column(), t ? t->lexeme : std::string());
  }

  [[noreturn]] void fail(const std::string& message) const {
    if (const Token* t = peek()) {
      throw SparqlError(SparqlError::Kind::Syntax, message + " near '" + t->lexeme + "'", t->line,
                        t->column, t->lexeme);
    }
    throw SparqlError(SparqlError::Kind::Syntax, message + " at end of query", last_line(),
                      last_column());
  }

  bool peek_keyword(std::string_view kw, std::size_t ahead = 0) const {
    const Token* t = peek(ahead);
    return t != nullptr && t->is_keyword(kw);
  }
  bool peek_punct(std::string_view p, std::size_t ahead = 0) const {
    const Token* t = peek(ahead);
    return t != nullptr && t->is_punct(p);
  }
  bool peek_kind(TokenKind kind, std::size_t ahead = 0) const {
    const Token* t = peek(ahead);
    return t != nullptr && t->kind == kind;
  }
  bool peek_path_op(std::string_view op) const {
    const Token* t = peek();
    return t != nullptr && t->kind == TokenKind::PathOperator && t->text == op;
  }
  bool accept_keyword(std::string_view kw) {
    if (!peek_keyword(kw)) return false;
    ++pos_;
    return true;
  }
  bool accept_punct(std::string_view p) {
    if (!peek_punct(p)) return false;
    ++pos_;
    return true;
  }
  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) fail("expected " + std::string(kw));
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
  }

  // -- terms ----------------------------------------------------------------

  std::string expand(const Token& t) {
    auto [label, local] = split_prefixed_name(t.lexeme);
    if (auto ns = prologue_->prefixes.find(label)) return *ns + local;
    if (auto ns = options_.extra_prefixes.find(label)) {
      prologue_->prefixes.declare(label, *ns);
      prologue_->injected.push_back(label);
      return *ns + local;
    }
    throw SparqlError(SparqlError::Kind::UndeclaredPrefix, "undeclared prefix '" + label + ":'",
                      t.line, t.column, label);
  }

  std::string iri_value(const Token& t) {
    std::string raw = t.lexeme.substr(1, t.lexeme.size() - 2);
    if (prologue_->base && !rdf::has_scheme(raw)) {
      if (auto resolved = rdf::resolve_iri(*prologue_->base, raw)) return *resolved;
    }
    return raw;
  }

  std::string parse_iri() {
    const Token& t = next();
    if (t.kind == TokenKind::Iri) return iri_value(t);
    if (t.kind == TokenKind::PrefixedName) return expand(t);
    --pos_;
    fail("expected IRI");
  }

  bool peek_iri() const {
    return peek_kind(TokenKind::Iri) || peek_kind(TokenKind::PrefixedName);
  }

  rdf::BlankNode fresh_blank() {
    std::string label;
    do {
      label = "_anon" + std::to_string(anon_counter_++);
    } while (user_blank_labels_.contains(label));
    return {label};
  }

  rdf::Literal numeric(std::string lexeme) {
    if (lexeme.find_first_of("eE") != std::string::npos) {
      return rdf::Literal::typed(std::move(lexeme), rdf::vocab::kXsdDouble);
    }
    if (lexeme.find('.') != std::string::npos) {
      return rdf::Literal::typed(std::move(lexeme), rdf::vocab::kXsdDecimal);
    }
    return rdf::Literal::typed(std::move(lexeme), rdf::vocab::kXsdInteger);
  }

  bool peek_signed_number() const {
    return (peek_punct("+") || peek_punct("-")) && peek_kind(TokenKind::NumericLiteral, 1);
  }

  rdf::Literal parse_literal() {
    const Token& t = next();
    if (t.kind == TokenKind::StringLiteral) {
      std::string lexical = unquote_string(t.lexeme);
      if (peek_kind(TokenKind::LangTag)) {
        return rdf::Literal::tagged(std::move(lexical), next().lexeme.substr(1));
      }
      if (accept_punct("^^")) return rdf::Literal::typed(std::move(lexical), parse_iri());
      return rdf::Literal::plain(std::move(lexical));
    }
    if (t.kind == TokenKind::NumericLiteral) return numeric(t.lexeme);
    if (t.is_punct("+") || t.is_punct("-")) {
      const Token& n = next();
      return numeric((t.text == "-" ? "-" : "+") + n.lexeme);
    }
    if (t.is_keyword("true") || t.is_keyword("false")) {
      return rdf::Literal::typed(t.text, rdf::vocab::kXsdBoolean);
    }
    --pos_;
    fail("expected literal");
  }

  bool peek_literal() const {
    return peek_kind(TokenKind::StringLiteral) || peek_kind(TokenKind::NumericLiteral) ||
           peek_signed_number() || peek_keyword("true") || peek_keyword("false");
  }

  VarOrTerm parse_var_or_term() {
    const Token* t = peek();
    if (t == nullptr) fail("expected term");
    switch (t->kind) {
      case TokenKind::Variable: ++pos_; return Variable{t->lexeme.substr(1)};
      case TokenKind::Iri:
      case TokenKind::PrefixedName: return rdf::Iri{parse_iri()};
      case TokenKind::BlankNode: ++pos_; return rdf::BlankNode{t->lexeme.substr(2)};
      default: break;
    }
    if (peek_literal()) return parse_literal();
    if (peek_punct("[") && peek_punct("]", 1)) {
      pos_ += 2;
      return fresh_blank();
    }
    if (peek_punct("(")) {
      fail("RDF collections are not supported in triple patterns");
    }
    fail("expected variable or RDF term");
  }

  VarOrIri parse_var_or_iri() {
    if (peek_kind(TokenKind::Variable)) return Variable{next().lexeme.substr(1)};
    return rdf::Iri{parse_iri()};
  }

  // -- prologue and query forms -----------------------------------------------

  void parse_prologue(Prologue& prologue) {
    while (true) {
      if (accept_keyword("BASE")) {
        if (!peek_kind(TokenKind::Iri)) fail("expected base IRI");
        const Token& t = next();
        prologue.base = t.lexeme.substr(1, t.lexeme.size() - 2);
      } else if (accept_keyword("PREFIX")) {
        if (!peek_kind(TokenKind::PrefixedName)) fail("expected prefix label");
        const Token& label_tok = next();
        auto [label, local] = split_prefixed_name(label_tok.lexeme);
        if (!local.empty()) fail("malformed prefix declaration");
        if (!peek_kind(TokenKind::Iri)) fail("expected namespace IRI");
        prologue.prefixes.declare(label, iri_value(next()));
      } else {
        return;
      }
    }
  }

  void parse_dataset(Query& q) {
    while (accept_keyword("FROM")) {
      bool named = accept_keyword("NAMED");
      q.dataset.push_back({parse_iri(), named});
    }
  }

  void parse_named_subqueries(Query& q) {
    while (peek_keyword("WITH")) {
      if (options_.dialect == Dialect::Strict) {
        fail_non_compliant("named subqueries (WITH { ... } AS %name) are not SPARQL 1.1");
      }
      ++pos_;
      expect_punct("{");
      if (!peek_keyword("SELECT")) fail("expected SELECT inside WITH block");
      Query sub;
      parse_select(sub, false);
      expect_punct("}");
      expect_keyword("AS");
      if (!peek_kind(TokenKind::NamedSubqueryRef)) fail("expected %name after AS");
      q.named_subqueries.push_back({next().lexeme.substr(1), std::move(sub)});
    }
  }

  void parse_where(Query& q, bool optional_clause) {
    bool had_keyword = accept_keyword("WHERE");
    if (!peek_punct("{")) {
      if (optional_clause && !had_keyword) return;
      fail("expected '{'");
    }
    q.where = parse_group();
  }

  void parse_select(Query& q, bool top_level) {
    q.form = QueryForm::Select;
    expect_keyword("SELECT");
    if (accept_keyword("DISTINCT")) {
      q.modifier = SelectModifier::Distinct;
    } else if (accept_keyword("REDUCED")) {
      q.modifier = SelectModifier::Reduced;
    }
    if (accept_punct("*")) {
      q.projection.star = true;
    } else {
      while (true) {
        if (peek_kind(TokenKind::Variable)) {
          q.projection.items.push_back({std::nullopt, Variable{next().lexeme.substr(1)}});
        } else if (peek_punct("(")) {
          ++pos_;
          Expression e = collect_until_as();
          expect_keyword("AS");
          if (!peek_kind(TokenKind::Variable)) fail("expected variable after AS");
          Variable v{next().lexeme.substr(1)};
          expect_punct(")");
          q.projection.items.push_back({std::move(e), std::move(v)});
        } else {
          break;
        }
      }
      if (q.projection.items.empty()) fail("expected projection");
    }
    if (top_level) parse_dataset(q);
    parse_named_subqueries(q);
    parse_where(q, false);
    parse_named_subqueries(q);
    parse_solution_modifiers(q);
    parse_values_clause(q);
  }

  void parse_ask(Query& q) {
    q.form = QueryForm::Ask;
    expect_keyword("ASK");
    parse_dataset(q);
    parse_named_subqueries(q);
    parse_where(q, false);
    parse_named_subqueries(q);
    parse_solution_modifiers(q);
    parse_values_clause(q);
  }

  void parse_construct(Query& q) {
    q.form = QueryForm::Construct;
    expect_keyword("CONSTRUCT");
    if (peek_keyword("WHERE")) {
      // Short form: the template is the WHERE clause's triples.
      ++pos_;
      expect_punct("{");
      Bgp bgp;
      if (!peek_punct("}")) parse_triples_block(bgp.triples);
      expect_punct("}");
      q.construct_template = bgp.triples;
      q.where = GroupPattern{};
      if (!bgp.triples.empty()) q.where->elements.emplace_back(std::move(bgp));
    } else {
      expect_punct("{");
      if (!peek_punct("}")) parse_triples_block(q.construct_template);
      expect_punct("}");
      parse_dataset(q);
      parse_named_subqueries(q);
      parse_where(q, false);
      parse_named_subqueries(q);
    }
    parse_solution_modifiers(q);
    parse_values_clause(q);
  }

  void parse_describe(Query& q) {
    q.form = QueryForm::Describe;
    expect_keyword("DESCRIBE");
    if (accept_punct("*")) {
      q.describe_star = true;
    } else {
      while (peek_kind(TokenKind::Variable) || peek_iri()) q.describe_targets.push_back(parse_var_or_iri());
      if (q.describe_targets.empty()) fail("expected DESCRIBE target");
    }
    parse_dataset(q);
    parse_named_subqueries(q);
    parse_where(q, true);
    parse_named_subqueries(q);
    parse_solution_modifiers(q);
    parse_values_clause(q);
  }

  std::uint64_t parse_count() {
    if (!peek_kind(TokenKind::NumericLiteral)) fail("expected non-negative integer");
    const Token& t = next();
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), value);
    if (ec != std::errc{} || ptr != t.lexeme.data() + t.lexeme.size()) {
      --pos_;
      fail("expected non-negative integer");
    }
    return value;
  }

  void parse_solution_modifiers(Query& q) {
    if (accept_keyword("GROUP")) {
      expect_keyword("BY");
      q.group_by = collect_clause();
    }
    if (accept_keyword("HAVING")) q.having = collect_clause();
    if (accept_keyword("ORDER")) {
      expect_keyword("BY");
      q.order_by = collect_clause();
    }
    for (int i = 0; i < 2; ++i) {
      if (!q.limit && accept_keyword("LIMIT")) {
        q.limit = parse_count();
      } else if (!q.offset && accept_keyword("OFFSET")) {
        q.offset = parse_count();
      }
    }
  }

  void parse_values_clause(Query& q) {
    if (accept_keyword("VALUES")) q.values = parse_inline_data_body();
  }

  // -- graph patterns -------------------------------------------------------

  bool starts_triple() const {
    const Token* t = peek();
    if (t == nullptr) return false;
    switch (t->kind) {
      case TokenKind::Variable:
      case TokenKind::Iri:
      case TokenKind::PrefixedName:
      case TokenKind::BlankNode:
      case TokenKind::StringLiteral:
      case TokenKind::NumericLiteral:
        return true;
      default:
        break;
    }
    return t->is_punct("[") || t->is_punct("(") || peek_signed_number() ||
           t->is_keyword("true") || t->is_keyword("false");
  }

  GroupPattern parse_group() {
    expect_punct("{");
    GroupPattern g;
    if (peek_keyword("SELECT")) {
      Query sub;
      parse_select(sub, false);
      expect_punct("}");
      g.elements.emplace_back(SubSelect{std::move(sub)});
      return g;
    }
    while (true) {
      if (accept_punct("}")) break;
      if (at_end()) fail("unterminated group");
      if (starts_triple()) {
        Bgp bgp;
        bool dotted = parse_triples_block(bgp.triples);
        g.elements.emplace_back(std::move(bgp));
        if (!dotted && starts_triple()) fail("expected '.' between triple patterns");
        continue;
      }
      g.elements.push_back(parse_non_triples());
      accept_punct(".");
    }
    return g;
  }

  // Returns whether the block ended with a `.`.
  bool parse_triples_block(std::vector<TriplePattern>& out) {
    while (true) {
      parse_triples_same_subject(out);
      if (!accept_punct(".")) return false;
      if (!starts_triple()) return true;
    }
  }

  PatternElement parse_non_triples() {
    const Token& t = *peek();
    if (accept_keyword("OPTIONAL")) return OptionalPattern{parse_group()};
    if (accept_keyword("MINUS")) return MinusPattern{parse_group()};
    if (accept_keyword("GRAPH")) {
      VarOrIri name = parse_var_or_iri();
      return GraphPattern{std::move(name), parse_group()};
    }
    if (accept_keyword("SERVICE")) {
      bool silent = accept_keyword("SILENT");
      VarOrIri endpoint = parse_var_or_iri();
      return ServicePattern{std::move(endpoint), silent, parse_group()};
    }
    if (accept_keyword("FILTER")) return Filter{parse_constraint()};
    if (accept_keyword("BIND")) {
      expect_punct("(");
      Expression e = collect_until_as();
      expect_keyword("AS");
      if (!peek_kind(TokenKind::Variable)) fail("expected variable after AS");
      Variable v{next().lexeme.substr(1)};
      expect_punct(")");
      return Bind{std::move(e), std::move(v)};
    }
    if (accept_keyword("VALUES")) return parse_inline_data_body();
    if (t.is_keyword("INCLUDE")) {
      if (options_.dialect == Dialect::Strict) fail_non_compliant("INCLUDE %name is not SPARQL 1.1");
      ++pos_;
      if (!peek_kind(TokenKind::NamedSubqueryRef)) fail("expected %name after INCLUDE");
      const Token& ref = next();
      includes_.push_back(&ref);
      return NamedInclude{ref.lexeme.substr(1)};
    }
    if (peek_punct("{")) {
      std::vector<GroupPattern> alternatives;
      alternatives.push_back(parse_group());
      while (accept_keyword("UNION")) alternatives.push_back(parse_group());
      if (alternatives.size() > 1) return UnionPattern{std::move(alternatives)};
      auto& only = alternatives.front();
      if (only.elements.size() == 1 && std::holds_alternative<SubSelect>(only.elements.front())) {
        return std::move(only.elements.front());
      }
      return NestedGroup{std::move(only)};
    }
    fail("unexpected token in group pattern");
  }

  void parse_triples_same_subject(std::vector<TriplePattern>& out) {
    if (peek_punct("[") && !peek_punct("]", 1)) {
      VarOrTerm subject = parse_blank_property_list(out);
      if (starts_verb()) parse_property_list(subject, out);
      return;
    }
    VarOrTerm subject = parse_var_or_term();
    parse_property_list(subject, out);
  }

  bool starts_verb() const {
    const Token* t = peek();
    if (t == nullptr) return false;
    return t->kind == TokenKind::Variable || t->kind == TokenKind::Iri ||
           t->kind == TokenKind::PrefixedName || t->is_keyword("a") ||
           (t->kind == TokenKind::PathOperator && t->text == "^") || t->is_punct("!") ||
           t->is_punct("(");
  }

  VarOrTerm parse_blank_property_list(std::vector<TriplePattern>& out) {
    expect_punct("[");
    rdf::BlankNode node = fresh_blank();
    parse_property_list(node, out);
    expect_punct("]");
    return node;
  }

  void parse_property_list(const VarOrTerm& subject, std::vector<TriplePattern>& out) {
    while (true) {
      if (!starts_verb()) fail("expected predicate");
      Verb verb = peek_kind(TokenKind::Variable) ? Verb{Variable{next().lexeme.substr(1)}}
                                                  : Verb{parse_path()};
      while (true) {
        VarOrTerm object = (peek_punct("[") && !peek_punct("]", 1))
                               ? parse_blank_property_list(out)
                               : parse_var_or_term();
        out.push_back({subject, verb, std::move(object)});
        if (!accept_punct(",")) break;
      }
      if (!accept_punct(";")) return;
      while (accept_punct(";")) {
      }
      if (!starts_verb()) return;
    }
  }

  // -- property paths -------------------------------------------------------

  PropertyPath parse_path() {
    std::vector<PropertyPath> alternatives{parse_path_sequence()};
    while (peek_path_op("|")) {
      ++pos_;
      alternatives.push_back(parse_path_sequence());
    }
    if (alternatives.size() == 1) return std::move(alternatives.front());
    return PropertyPath::nary(PropertyPath::Kind::Alternative, std::move(alternatives));
  }

  PropertyPath parse_path_sequence() {
    std::vector<PropertyPath> steps{parse_path_elt_or_inverse()};
    while (peek_path_op("/")) {
      ++pos_;
      steps.push_back(parse_path_elt_or_inverse());
    }
    if (steps.size() == 1) return std::move(steps.front());
    return PropertyPath::nary(PropertyPath::Kind::Sequence, std::move(steps));
  }

  PropertyPath parse_path_elt_or_inverse() {
    if (peek_path_op("^")) {
      ++pos_;
      return PropertyPath::unary(PropertyPath::Kind::Inverse, parse_path_elt());
    }
    return parse_path_elt();
  }

  PropertyPath parse_path_elt() {
    PropertyPath primary = parse_path_primary();
    if (peek_path_op("?")) {
      ++pos_;
      return PropertyPath::unary(PropertyPath::Kind::ZeroOrOne, std::move(primary));
    }
    if (peek_punct("*")) {
      ++pos_;
      return PropertyPath::unary(PropertyPath::Kind::ZeroOrMore, std::move(primary));
    }
    if (peek_punct("+")) {
      // `+5` directly adjacent is a signed object, not a path modifier.
      const Token* n = peek(1);
      bool signed_number = n != nullptr && n->kind == TokenKind::NumericLiteral &&
                           n->offset == peek()->offset + 1;
      if (!signed_number) {
        ++pos_;
        return PropertyPath::unary(PropertyPath::Kind::OneOrMore, std::move(primary));
      }
    }
    return primary;
  }

  PropertyPath::NegatedItem parse_negated_item() {
    bool inverse = false;
    if (peek_path_op("^")) {
      ++pos_;
      inverse = true;
    }
    if (accept_keyword("a")) return {rdf::vocab::kRdfType, inverse};
    return {parse_iri(), inverse};
  }

  PropertyPath parse_path_primary() {
    if (accept_keyword("a")) return PropertyPath::link(rdf::vocab::kRdfType);
    if (peek_iri()) return PropertyPath::link(parse_iri());
    if (accept_punct("!")) {
      PropertyPath p{PropertyPath::Kind::NegatedSet, {}, {}, {}};
      if (accept_punct("(")) {
        if (!peek_punct(")")) {
          p.negated.push_back(parse_negated_item());
          while (peek_path_op("|")) {
            ++pos_;
            p.negated.push_back(parse_negated_item());
          }
        }
        expect_punct(")");
      } else {
        p.negated.push_back(parse_negated_item());
      }
      return p;
    }
    if (accept_punct("(")) {
      PropertyPath inner = parse_path();
      expect_punct(")");
      return inner;
    }
    fail("expected property path");
  }

  // -- expressions ----------------------------------------------------------

  ExprToken expr_token(const Token& t) {
    if (t.kind == TokenKind::PrefixedName) expand(t);
    return {t.kind, t.text};
  }

  // Consumes one token (or an EXISTS group) into `e`, tracking depth.
  void push_expr_item(Expression& e, int& depth) {
    const Token& t = next();
    if (t.is_punct("(")) ++depth;
    if (t.is_punct(")")) --depth;
    if (t.is_punct("{") || t.is_punct("}")) {
      --pos_;
      fail("unbalanced braces in expression");
    }
    e.items.emplace_back(expr_token(t));
    if (t.is_keyword("EXISTS")) {
      if (!peek_punct("{")) fail("expected '{' after EXISTS");
      e.items.emplace_back(ExistsGroup{parse_group()});
    }
  }

  Expression parse_balanced() {
    Expression e;
    int depth = 0;
    if (!peek_punct("(")) fail("expected '('");
    do {
      push_expr_item(e, depth);
    } while (depth > 0);
    return e;
  }

  Expression parse_constraint() {
    if (peek_punct("(")) return parse_balanced();
    Expression e;
    if (peek_keyword("NOT") || peek_keyword("EXISTS")) {
      if (accept_keyword("NOT")) e.items.emplace_back(ExprToken{TokenKind::Keyword, "NOT"});
      int depth = 0;
      if (!peek_keyword("EXISTS")) fail("expected EXISTS");
      push_expr_item(e, depth);
      return e;
    }
    const Token* t = peek();
    if (t != nullptr &&
        (t->kind == TokenKind::Keyword || t->kind == TokenKind::Iri ||
         t->kind == TokenKind::PrefixedName) &&
        peek_punct("(", 1)) {
      e.items.emplace_back(expr_token(next()));
      Expression args = parse_balanced();
      e.items.insert(e.items.end(), args.items.begin(), args.items.end());
      return e;
    }
    fail("expected constraint after FILTER");
  }

  Expression collect_until_as() {
    Expression e;
    int depth = 0;
    while (true) {
      if (at_end()) fail("expected AS");
      if (depth == 0 && peek_keyword("AS")) break;
      if (depth == 0 && peek_punct(")")) fail("expected AS");
      push_expr_item(e, depth);
    }
    if (e.items.empty()) fail("empty expression");
    return e;
  }

  Expression collect_clause() {
    Expression e;
    int depth = 0;
    while (!at_end()) {
      const Token& t = *peek();
      if (depth == 0 && (t.is_punct("}") || (t.kind == TokenKind::Keyword &&
                                             kClauseKeywords.contains(t.text)))) {
        break;
      }
      if (depth == 0 && t.is_punct(")")) fail("unbalanced ')'");
      push_expr_item(e, depth);
    }
    if (e.items.empty()) fail("empty solution modifier");
    return e;
  }

  // -- inline data ------------------------------------------------------------

  std::optional<rdf::Term> parse_data_value() {
    if (accept_keyword("UNDEF")) return std::nullopt;
    if (peek_iri()) return rdf::Iri{parse_iri()};
    if (peek_literal()) return parse_literal();
    fail("expected data value");
  }

  InlineData parse_inline_data_body() {
    InlineData data;
    if (peek_kind(TokenKind::Variable)) {
      data.variables.push_back({next().lexeme.substr(1)});
      expect_punct("{");
      while (!accept_punct("}")) {
        if (at_end()) fail("unterminated VALUES block");
        data.rows.push_back({parse_data_value()});
      }
      return data;
    }
    expect_punct("(");
    while (peek_kind(TokenKind::Variable)) data.variables.push_back({next().lexeme.substr(1)});
    expect_punct(")");
    expect_punct("{");
    while (!accept_punct("}")) {
      expect_punct("(");
      std::vector<std::optional<rdf::Term>> row;
      while (!accept_punct(")")) {
        if (at_end()) fail("unterminated VALUES row");
        row.push_back(parse_data_value());
      }
      if (row.size() != data.variables.size()) fail("VALUES row arity mismatch");
      data.rows.push_back(std::move(row));
    }
    return data;
  }
};

}  // namespace

Query parse_query(std::string_view text, const ParseOptions& options) {
  Parser parser(tokenize(text), options);
  return parser.parse();
}

}  // namespace exemplar::sparql
