#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace exemplar::sparql {

// Token classes. Strings and numbers are the two literal kinds; `LangTag`
// follows a string. `PathOperator` covers `/ | ^` and a standalone `?`;
// `* + !` are reported as punctuation because they double as expression
// operators. `NamedSubqueryRef` is the `%name` form of the extended dialect.
enum class TokenKind {
  Iri,
  PrefixedName,
  Variable,
  BlankNode,
  StringLiteral,
  NumericLiteral,
  LangTag,
  Keyword,
  Punctuation,
  PathOperator,
  NamedSubqueryRef,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string lexeme;  // exact source text
  std::string text;    // canonical form: keywords upper-cased (except `a`, true, false)
  std::size_t line = 0;
  std::size_t column = 0;
  std::size_t offset = 0;  // byte offset of the first character

  std::size_t end_offset() const { return offset + lexeme.size(); }
  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool is_keyword(std::string_view upper) const { return is(TokenKind::Keyword, upper); }
  bool is_punct(std::string_view p) const { return kind == TokenKind::Punctuation && text == p; }
};

class SparqlError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UndeclaredPrefix, UnknownForm, NonCompliant };

  SparqlError(Kind kind, const std::string& message, std::size_t line = 0, std::size_t column = 0,
              std::string detail = {});

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  /// For UndeclaredPrefix: the prefix label. For Syntax: the offending token.
  const std::string& detail() const { return detail_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

/// Splits SPARQL text into tokens. Comments and whitespace are dropped and
/// no end-of-input token is appended, so empty input yields an empty list.
std::vector<Token> tokenize(std::string_view text);

/// Splits a prefixed-name lexeme into (label, local) with local escapes removed.
std::pair<std::string, std::string> split_prefixed_name(std::string_view lexeme);

/// Decodes the escapes of a string-literal lexeme (quotes included).
std::string unquote_string(std::string_view lexeme);

}  // namespace exemplar::sparql
