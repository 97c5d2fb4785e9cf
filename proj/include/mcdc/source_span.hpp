#pragma once

#include <stdexcept>
#include <string>

namespace mcdc {

/// 1-based line/column range inside one source file. End is inclusive of the
/// last character.
struct SourceSpan {
  std::string file;
  int start_line = 0;
  int start_col = 0;
  int end_line = 0;
  int end_col = 0;

  bool contains(const SourceSpan& other) const;
  std::string str() const;  // file:l:c-l:c

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

SourceSpan cover(const SourceSpan& a, const SourceSpan& b);

/// Base for every diagnostic the toolkit raises. Carries a span so the CLI
/// can render `file:line:col: message`.
class Diagnostic : public std::runtime_error {
 public:
  Diagnostic(std::string kind, SourceSpan span, const std::string& message);

  const std::string& kind() const { return kind_; }
  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }
  std::string render() const;

 private:
  std::string kind_;
  SourceSpan span_;
  std::string message_;
};

class ParseError : public Diagnostic {
 public:
  ParseError(SourceSpan span, const std::string& message)
      : Diagnostic("parse error", std::move(span), message) {}
};

class TypeError : public Diagnostic {
 public:
  TypeError(SourceSpan span, const std::string& message)
      : Diagnostic("type error", std::move(span), message) {}
};

/// Raised by the checker when a match is not exhaustive. `witness` is a
/// pretty-printed value no arm matches.
class NonExhaustiveError : public TypeError {
 public:
  NonExhaustiveError(SourceSpan span, std::string witness);
  const std::string& witness() const { return witness_; }

 private:
  std::string witness_;
};

class RuntimeError : public Diagnostic {
 public:
  RuntimeError(SourceSpan span, const std::string& message)
      : Diagnostic("runtime error", std::move(span), message) {}
};

}  // namespace mcdc
