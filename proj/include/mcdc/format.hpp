#pragma once

#include <string>
#include <vector>

#include "mcdc/source_span.hpp"

namespace mcdc {

/// One piece of a `print!`/`panic!` format string.
struct FormatPiece {
  enum class Kind { Text, Next, Named };
  Kind kind = Kind::Text;
  std::string text;  // literal text, or the interpolated name
};

/// Splits a format string into text and `{}` / `{name}` holes. `{{` and `}}`
/// are literal braces. Throws TypeError on an unbalanced brace.
std::vector<FormatPiece> parse_format(const std::string& format, const SourceSpan& span);

}  // namespace mcdc
