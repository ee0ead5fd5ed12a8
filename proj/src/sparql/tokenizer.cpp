#include <algorithm>
#include <cctype>

#include "exemplar/sparql/token.hpp"

namespace exemplar::sparql {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Iri: return "IRI";
    case TokenKind::PrefixedName: return "prefixed name";
    case TokenKind::Variable: return "variable";
    case TokenKind::BlankNode: return "blank node";
    case TokenKind::StringLiteral: return "string";
    case TokenKind::NumericLiteral: return "number";
    case TokenKind::LangTag: return "language tag";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Punctuation: return "punctuation";
    case TokenKind::PathOperator: return "path operator";
    case TokenKind::NamedSubqueryRef: return "named subquery";
  }
  return "?";
}

SparqlError::SparqlError(Kind kind, const std::string& message, std::size_t line,
                         std::size_t column, std::string detail)
    : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " +
                                        message
                                  : message),
      kind_(kind),
      line_(line),
      column_(column),
      detail_(std::move(detail)) {}

namespace {

bool is_name_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_name_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }
bool is_pn_char(unsigned char c) { return is_name_char(c) || c == '-'; }

bool is_iriref_char(unsigned char c) {
  return c > 0x20 && c != '<' && c != '>' && c != '"' && c != '{' && c != '}' && c != '|' &&
         c != '^' && c != '`' && c != '\\';
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      if (pos_ >= text_.size()) break;
      out.push_back(next());
    }
    return out;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (pos_ < text_.size() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t line, std::size_t col) const {
    throw SparqlError(SparqlError::Kind::Syntax, msg, line, col);
  }

  Token make(TokenKind kind, std::size_t start, std::size_t line, std::size_t col,
             std::string text = {}) {
    Token t;
    t.kind = kind;
    t.lexeme = std::string(text_.substr(start, pos_ - start));
    t.text = text.empty() ? t.lexeme : std::move(text);
    t.line = line;
    t.column = col;
    t.offset = start;
    return t;
  }

  Token next() {
    const std::size_t start = pos_, line = line_, col = col_;
    const auto c = static_cast<unsigned char>(peek());

    if (c == '<') {
      std::size_t j = pos_ + 1;
      while (j < text_.size() && is_iriref_char(static_cast<unsigned char>(text_[j]))) ++j;
      if (j < text_.size() && text_[j] == '>') {
        advance(j + 1 - pos_);
        return make(TokenKind::Iri, start, line, col);
      }
      advance(peek(1) == '=' ? 2 : 1);
      return make(TokenKind::Punctuation, start, line, col);
    }
    if (c == '?' || c == '$') {
      if (is_name_char(static_cast<unsigned char>(peek(1)))) {
        advance();
        while (is_name_char(static_cast<unsigned char>(peek()))) advance();
        return make(TokenKind::Variable, start, line, col);
      }
      if (c == '$') fail("'$' must start a variable", line, col);
      advance();
      return make(TokenKind::PathOperator, start, line, col);
    }
    if (c == '"' || c == '\'') return string_literal(start, line, col);
    if (c == '@') {
      advance();
      if (!std::isalpha(static_cast<unsigned char>(peek()))) fail("malformed language tag", line, col);
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-') advance();
      return make(TokenKind::LangTag, start, line, col);
    }
    if (std::isdigit(c) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      return number(start, line, col);
    }
    if (c == '_' && peek(1) == ':') {
      advance(2);
      if (!is_name_char(static_cast<unsigned char>(peek()))) fail("empty blank node label", line, col);
      while (is_pn_char(static_cast<unsigned char>(peek())) ||
             (peek() == '.' && is_pn_char(static_cast<unsigned char>(peek(1))))) {
        advance();
      }
      return make(TokenKind::BlankNode, start, line, col);
    }
    if (c == '%' && is_name_char(static_cast<unsigned char>(peek(1)))) {
      advance();
      while (is_pn_char(static_cast<unsigned char>(peek()))) advance();
      return make(TokenKind::NamedSubqueryRef, start, line, col);
    }
    if (is_name_start(c) || c == ':') return name(start, line, col);

    static constexpr std::string_view kTwoChar[] = {"^^", "&&", "||", "!=", ">="};
    for (auto op : kTwoChar) {
      if (text_.substr(pos_, 2) == op) {
        advance(2);
        return make(TokenKind::Punctuation, start, line, col);
      }
    }
    switch (c) {
      case '/':
      case '|':
      case '^':
        advance();
        return make(TokenKind::PathOperator, start, line, col);
      case '{': case '}': case '(': case ')': case '[': case ']': case '.': case ',':
      case ';': case '=': case '>': case '!': case '+': case '-': case '*':
        advance();
        return make(TokenKind::Punctuation, start, line, col);
      default:
        break;
    }
    fail(std::string("unexpected character '") + static_cast<char>(c) + "'", line, col);
  }

  Token string_literal(std::size_t start, std::size_t line, std::size_t col) {
    const char quote = peek();
    const bool long_form = peek(1) == quote && peek(2) == quote;
    advance(long_form ? 3 : 1);
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated string literal", line, col);
      char ch = peek();
      if (ch == '\\') {
        advance(2);
        continue;
      }
      if (long_form) {
        if (ch == quote && peek(1) == quote && peek(2) == quote) {
          advance(3);
          break;
        }
      } else {
        if (ch == quote) {
          advance();
          break;
        }
        if (ch == '\n' || ch == '\r') fail("unterminated string literal", line, col);
      }
      advance();
    }
    return make(TokenKind::StringLiteral, start, line, col);
  }

  Token number(std::size_t start, std::size_t line, std::size_t col) {
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (std::isdigit(static_cast<unsigned char>(peek(1))) ||
         ((peek(1) == '+' || peek(1) == '-') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
      advance(2);
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    return make(TokenKind::NumericLiteral, start, line, col);
  }

  Token name(std::size_t start, std::size_t line, std::size_t col) {
    // Longest candidate prefix label, then decide between pname and keyword.
    std::size_t j = pos_;
    while (j < text_.size()) {
      auto ch = static_cast<unsigned char>(text_[j]);
      if (is_pn_char(ch) ||
          (ch == '.' && j + 1 < text_.size() && is_pn_char(static_cast<unsigned char>(text_[j + 1])))) {
        ++j;
      } else {
        break;
      }
    }
    if (j < text_.size() && text_[j] == ':') {
      advance(j + 1 - pos_);
      local_name();
      return make(TokenKind::PrefixedName, start, line, col);
    }
    while (is_name_char(static_cast<unsigned char>(peek()))) advance();
    auto word = text_.substr(start, pos_ - start);
    std::string canonical;
    if (word == "a") {
      canonical = "a";
    } else if (auto l = lower(word); l == "true" || l == "false") {
      canonical = l;
    } else {
      canonical = upper(word);
    }
    return make(TokenKind::Keyword, start, line, col, canonical);
  }

  void local_name() {
    while (pos_ < text_.size()) {
      auto ch = static_cast<unsigned char>(peek());
      if (is_pn_char(ch) || ch == ':') {
        advance();
      } else if (ch == '.') {
        auto n = static_cast<unsigned char>(peek(1));
        if (is_pn_char(n) || n == ':' || n == '%' || n == '\\') {
          advance();
        } else {
          break;
        }
      } else if (ch == '%' && std::isxdigit(static_cast<unsigned char>(peek(1))) &&
                 std::isxdigit(static_cast<unsigned char>(peek(2)))) {
        advance(3);
      } else if (ch == '\\' && pos_ + 1 < text_.size()) {
        advance(2);
      } else {
        break;
      }
    }
  }
};

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

}  // namespace

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

std::pair<std::string, std::string> split_prefixed_name(std::string_view lexeme) {
  auto colon = lexeme.find(':');
  std::string label(lexeme.substr(0, colon));
  std::string local;
  auto rest = lexeme.substr(colon + 1);
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (rest[i] == '\\' && i + 1 < rest.size()) {
      local += rest[++i];
    } else {
      local += rest[i];
    }
  }
  return {label, local};
}

std::string unquote_string(std::string_view lexeme) {
  const char quote = lexeme.front();
  const bool long_form = lexeme.size() >= 6 && lexeme[1] == quote && lexeme[2] == quote;
  const std::size_t q = long_form ? 3 : 1;
  auto body = lexeme.substr(q, lexeme.size() - 2 * q);
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c != '\\' || i + 1 >= body.size()) {
      out += c;
      continue;
    }
    char e = body[++i];
    switch (e) {
      case 't': out += '\t'; break;
      case 'b': out += '\b'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case 'f': out += '\f'; break;
      case 'u':
      case 'U': {
        const std::size_t digits = e == 'u' ? 4 : 8;
        auto hex = body.substr(i + 1, std::min(digits, body.size() - i - 1));
        if (hex.size() != digits ||
            !std::all_of(hex.begin(), hex.end(),
                         [](char h) { return std::isxdigit(static_cast<unsigned char>(h)); })) {
          out += e;
          break;
        }
        std::uint32_t cp = static_cast<std::uint32_t>(
            std::stoul(std::string(body.substr(i + 1, digits)), nullptr, 16));
        append_utf8(out, cp);
        i += digits;
        break;
      }
      default: out += e;
    }
  }
  return out;
}

}  // namespace exemplar::sparql
