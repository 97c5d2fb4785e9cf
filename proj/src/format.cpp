#include "mcdc/format.hpp"

#include <cctype>

namespace mcdc {

std::vector<FormatPiece> parse_format(const std::string& format, const SourceSpan& span) {
  std::vector<FormatPiece> out;
  std::string text;
  auto flush = [&] {
    if (!text.empty()) out.push_back({FormatPiece::Kind::Text, std::move(text)});
    text.clear();
  };
  for (std::size_t k = 0; k < format.size(); ++k) {
    char c = format[k];
    if (c == '{' && k + 1 < format.size() && format[k + 1] == '{') {
      text += '{';
      ++k;
    } else if (c == '}' && k + 1 < format.size() && format[k + 1] == '}') {
      text += '}';
      ++k;
    } else if (c == '{') {
      auto close = format.find('}', k);
      if (close == std::string::npos) throw TypeError(span, "unterminated `{` in format string");
      std::string name = format.substr(k + 1, close - k - 1);
      bool ident = !name.empty() && (std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_');
      for (char n : name) ident = ident && (std::isalnum(static_cast<unsigned char>(n)) || n == '_');
      if (!name.empty() && !ident) throw TypeError(span, "unsupported format placeholder `{" + name + "}`");
      flush();
      out.push_back({name.empty() ? FormatPiece::Kind::Next : FormatPiece::Kind::Named, name});
      k = close;
    } else if (c == '}') {
      throw TypeError(span, "unmatched `}` in format string");
    } else {
      text += c;
    }
  }
  flush();
  return out;
}

}  // namespace mcdc
