#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mcdc/ast.hpp"

namespace mcdc {

enum class TokenKind {
  Ident,
  Int,
  Char,
  Str,
  Keyword,
  Punct,
  Eof,
};

struct Token {
  TokenKind kind = TokenKind::Eof;
  std::string text;   // identifier/keyword/punct spelling, or decoded string contents
  std::int64_t int_value = 0;
  char32_t char_value = 0;
  SourceSpan span;

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool is_punct(std::string_view t) const { return is(TokenKind::Punct, t); }
  bool is_keyword(std::string_view t) const { return is(TokenKind::Keyword, t); }
};

/// Splits RPS source into tokens. Throws ParseError on malformed literals or
/// stray characters. The returned vector always ends with an Eof token.
std::vector<Token> tokenize(std::string_view source, const std::string& file);

}  // namespace mcdc
