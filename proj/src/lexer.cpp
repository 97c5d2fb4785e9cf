#include "mcdc/lexer.hpp"

#include <array>
#include <cctype>
#include <limits>

namespace mcdc {
namespace {

constexpr std::array kKeywords = {
    "as",   "const", "else",   "enum", "false",  "fn",     "if",   "let",   "match",
    "mut",  "pub",   "ref",    "return", "static", "struct", "true", "while",
};

// Longest first so that `..=` wins over `..` and `.`.
constexpr std::array kPuncts = {
    "..=", "...", "::", "->", "=>", "==", "!=", "<=", ">=", "&&", "||", "+=", "-=", "*=", "/=",
    "%=",  "..",  "{",  "}",  "(",  ")",  "[",  "]",  ",",  ";",  ":",  ".",  "?",  "&",  "|",
    "!",   "=",   "<",  ">",  "+",  "-",  "*",  "/",  "%",  "@",  "_",
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  Lexer(std::string_view src, const std::string& file) : src_(src), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) {
        Token eof;
        eof.kind = TokenKind::Eof;
        eof.span = span_here(line_, col_);
        out.push_back(eof);
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  std::string_view src_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
      ++col_;
    }
    ++pos_;
  }

  SourceSpan span_here(int line, int col) const { return SourceSpan{file_, line, col, line, col}; }

  [[noreturn]] void fail(int line, int col, const std::string& msg) const {
    throw ParseError(span_here(line, col), msg);
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        int line = line_, col = col_;
        advance();
        advance();
        int depth = 1;
        while (depth > 0) {
          if (pos_ >= src_.size()) fail(line, col, "unterminated block comment");
          if (peek() == '/' && peek(1) == '*') {
            advance();
            advance();
            ++depth;
          } else if (peek() == '*' && peek(1) == '/') {
            advance();
            advance();
            --depth;
          } else {
            advance();
          }
        }
      } else {
        return;
      }
    }
  }

  Token finish(Token tok, int line, int col) {
    tok.span = SourceSpan{file_, line, col, line_, col_ - 1};
    if (tok.span.end_col < 1) tok.span.end_col = 1;
    return tok;
  }

  char32_t read_utf8_char(int line, int col) {
    auto lead = static_cast<unsigned char>(peek());
    int extra = lead < 0x80 ? 0 : (lead >> 5) == 0x6 ? 1 : (lead >> 4) == 0xE ? 2 : (lead >> 3) == 0x1E ? 3 : -1;
    if (extra < 0) fail(line, col, "invalid UTF-8 in literal");
    char32_t cp = extra == 0 ? lead : lead & (0x3F >> extra);
    advance();
    for (int k = 0; k < extra; ++k) {
      auto cont = static_cast<unsigned char>(peek());
      if ((cont & 0xC0) != 0x80) fail(line, col, "invalid UTF-8 in literal");
      cp = (cp << 6) | (cont & 0x3F);
      advance();
    }
    return cp;
  }

  char32_t read_escape(int line, int col) {
    advance();  // backslash
    char e = peek();
    if (pos_ >= src_.size()) fail(line, col, "unterminated escape");
    advance();
    switch (e) {
      case 'n': return '\n';
      case 't': return '\t';
      case 'r': return '\r';
      case '0': return 0;
      case '\\': return '\\';
      case '\'': return '\'';
      case '"': return '"';
      case 'u': {
        if (peek() != '{') fail(line, col, "expected `{` in unicode escape");
        advance();
        char32_t cp = 0;
        int digits = 0;
        while (std::isxdigit(static_cast<unsigned char>(peek()))) {
          char h = peek();
          cp = cp * 16 + (std::isdigit(static_cast<unsigned char>(h)) ? h - '0' : (std::tolower(h) - 'a' + 10));
          advance();
          if (++digits > 6) fail(line, col, "unicode escape too long");
        }
        if (peek() != '}' || digits == 0) fail(line, col, "malformed unicode escape");
        advance();
        if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail(line, col, "invalid unicode scalar value");
        return cp;
      }
      default: fail(line, col, std::string("unknown escape `\\") + e + "`");
    }
  }

  Token next() {
    int line = line_, col = col_;
    char c = peek();
    Token tok;

    if (is_ident_start(c) && !(c == '_' && !is_ident_char(peek(1)))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && is_ident_char(peek())) advance();
      tok.text = std::string(src_.substr(start, pos_ - start));
      tok.kind = TokenKind::Ident;
      for (const char* kw : kKeywords)
        if (tok.text == kw) tok.kind = TokenKind::Keyword;
      return finish(tok, line, col);
    }

    if (std::isdigit(static_cast<unsigned char>(c))) {
      tok.kind = TokenKind::Int;
      int base = 10;
      if (c == '0' && (peek(1) == 'x' || peek(1) == 'b' || peek(1) == 'o')) {
        base = peek(1) == 'x' ? 16 : peek(1) == 'b' ? 2 : 8;
        advance();
        advance();
      }
      unsigned long long v = 0;
      bool any = false;
      while (true) {
        char d = peek();
        if (d == '_') {
          advance();
          continue;
        }
        int digit = -1;
        if (std::isdigit(static_cast<unsigned char>(d))) digit = d - '0';
        else if (base == 16 && std::isxdigit(static_cast<unsigned char>(d))) digit = std::tolower(d) - 'a' + 10;
        if (digit < 0 || digit >= base) break;
        v = v * base + digit;
        if (v > static_cast<unsigned long long>(std::numeric_limits<std::int64_t>::max()))
          fail(line, col, "integer literal too large");
        any = true;
        advance();
      }
      if (!any) fail(line, col, "malformed integer literal");
      if (is_ident_start(peek())) fail(line, col, "integer suffixes and floats are not supported");
      tok.int_value = static_cast<std::int64_t>(v);
      return finish(tok, line, col);
    }

    if (c == '\'') {
      advance();
      tok.kind = TokenKind::Char;
      if (peek() == '\\') tok.char_value = read_escape(line, col);
      else if (peek() == '\'' || pos_ >= src_.size()) fail(line, col, "empty character literal");
      else tok.char_value = read_utf8_char(line, col);
      if (peek() != '\'') fail(line, col, "unterminated character literal");
      advance();
      return finish(tok, line, col);
    }

    if (c == '"') {
      advance();
      tok.kind = TokenKind::Str;
      while (true) {
        if (pos_ >= src_.size()) fail(line, col, "unterminated string literal");
        if (peek() == '"') break;
        if (peek() == '\\') tok.text += encode_utf8(read_escape(line, col));
        else tok.text += encode_utf8(read_utf8_char(line, col));
      }
      advance();
      return finish(tok, line, col);
    }

    for (const char* p : kPuncts) {
      std::string_view pv(p);
      if (src_.substr(pos_, pv.size()) == pv) {
        for (std::size_t k = 0; k < pv.size(); ++k) advance();
        tok.kind = TokenKind::Punct;
        tok.text = std::string(pv);
        return finish(tok, line, col);
      }
    }
    fail(line, col, std::string("unexpected character `") + c + "`");
  }
};

}  // namespace

std::vector<Token> tokenize(std::string_view source, const std::string& file) {
  return Lexer(source, file).run();
}

}  // namespace mcdc
