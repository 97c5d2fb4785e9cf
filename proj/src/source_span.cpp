#include "mcdc/source_span.hpp"

#include <tuple>

namespace mcdc {

bool SourceSpan::contains(const SourceSpan& other) const {
  auto begins_before = std::tie(start_line, start_col) <= std::tie(other.start_line, other.start_col);
  auto ends_after = std::tie(other.end_line, other.end_col) <= std::tie(end_line, end_col);
  return file == other.file && begins_before && ends_after;
}

std::string SourceSpan::str() const {
  return file + ":" + std::to_string(start_line) + ":" + std::to_string(start_col) + "-" +
         std::to_string(end_line) + ":" + std::to_string(end_col);
}

SourceSpan cover(const SourceSpan& a, const SourceSpan& b) {
  SourceSpan out = a;
  if (std::tie(b.start_line, b.start_col) < std::tie(a.start_line, a.start_col)) {
    out.start_line = b.start_line;
    out.start_col = b.start_col;
  }
  if (std::tie(b.end_line, b.end_col) > std::tie(a.end_line, a.end_col)) {
    out.end_line = b.end_line;
    out.end_col = b.end_col;
  }
  return out;
}

Diagnostic::Diagnostic(std::string kind, SourceSpan span, const std::string& message)
    : std::runtime_error(span.file + ":" + std::to_string(span.start_line) + ":" +
                         std::to_string(span.start_col) + ": " + kind + ": " + message),
      kind_(std::move(kind)),
      span_(std::move(span)),
      message_(message) {}

std::string Diagnostic::render() const { return what(); }

NonExhaustiveError::NonExhaustiveError(SourceSpan span, std::string witness)
    : TypeError(std::move(span), "non-exhaustive match: pattern `" + witness + "` not covered"),
      witness_(std::move(witness)) {}

}  // namespace mcdc
