#include "mcdc/value.hpp"

#include <tuple>

namespace mcdc {

Value Value::boolean(bool v) {
  Value out;
  out.kind = Kind::Bool;
  out.b = v;
  return out;
}

Value Value::integer(std::int64_t v) {
  Value out;
  out.kind = Kind::Int;
  out.i = v;
  return out;
}

Value Value::character(char32_t v) {
  Value out;
  out.kind = Kind::Char;
  out.c = v;
  return out;
}

Value Value::string(std::string v) {
  Value out;
  out.kind = Kind::Str;
  out.s = std::move(v);
  return out;
}

Value Value::enumeration(std::string variant_name, int variant_index, std::vector<Value> payload) {
  Value out;
  out.kind = Kind::Enum;
  out.s = std::move(variant_name);
  out.variant = variant_index;
  out.elems = std::move(payload);
  return out;
}

Value Value::structure(std::string name, std::vector<Value> fields) {
  Value out;
  out.kind = Kind::Struct;
  out.s = std::move(name);
  out.elems = std::move(fields);
  return out;
}

Value Value::tuple(std::vector<Value> elems) {
  Value out;
  out.kind = Kind::Tuple;
  out.elems = std::move(elems);
  return out;
}

Value Value::array(std::vector<Value> elems) {
  Value out;
  out.kind = Kind::Array;
  out.elems = std::move(elems);
  return out;
}

std::string encode_utf8(char32_t c) {
  std::string out;
  if (c < 0x80) {
    out += static_cast<char>(c);
  } else if (c < 0x800) {
    out += static_cast<char>(0xC0 | (c >> 6));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else if (c < 0x10000) {
    out += static_cast<char>(0xE0 | (c >> 12));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (c >> 18));
    out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  }
  return out;
}

namespace {

std::string hex_escape(char32_t c) {
  static const char* digits = "0123456789abcdef";
  std::string hex;
  for (char32_t v = c; v != 0; v >>= 4) hex.insert(hex.begin(), digits[v & 0xF]);
  if (hex.empty()) hex = "0";
  return "\\u{" + hex + "}";
}

}  // namespace

std::string escape_char(char32_t c) {
  switch (c) {
    case '\n': return "\\n";
    case '\t': return "\\t";
    case '\r': return "\\r";
    case '\\': return "\\\\";
    case '\'': return "\\'";
    case 0: return "\\0";
    default: break;
  }
  if (c < 0x20 || c == 0x7F) return hex_escape(c);
  return encode_utf8(c);
}

std::string escape_string(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      default: out += ch;
    }
  }
  return out;
}

namespace {

std::string join(const std::vector<Value>& elems, bool display) {
  std::string out;
  for (std::size_t k = 0; k < elems.size(); ++k) {
    if (k) out += ", ";
    out += display ? elems[k].display() : elems[k].str();
  }
  return out;
}

}  // namespace

std::string Value::str() const {
  switch (kind) {
    case Kind::Unit: return "()";
    case Kind::Bool: return b ? "true" : "false";
    case Kind::Int: return std::to_string(i);
    case Kind::Char: return "'" + escape_char(c) + "'";
    case Kind::Str: return "\"" + escape_string(s) + "\"";
    case Kind::Enum:
    case Kind::Struct:
      return elems.empty() ? s : s + "(" + join(elems, false) + ")";
    case Kind::Tuple:
      return elems.size() == 1 ? "(" + elems[0].str() + ",)" : "(" + join(elems, false) + ")";
    case Kind::Array: return "[" + join(elems, false) + "]";
  }
  return "?";
}

std::string Value::display() const {
  switch (kind) {
    case Kind::Char: return encode_utf8(c);
    case Kind::Str: return s;
    default: return str();
  }
}

bool operator==(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Value::Kind::Unit: return true;
    case Value::Kind::Bool: return a.b == b.b;
    case Value::Kind::Int: return a.i == b.i;
    case Value::Kind::Char: return a.c == b.c;
    case Value::Kind::Str: return a.s == b.s;
    case Value::Kind::Enum: return a.variant == b.variant && a.elems == b.elems;
    case Value::Kind::Struct:
    case Value::Kind::Tuple:
    case Value::Kind::Array: return a.elems == b.elems;
  }
  return false;
}

bool operator<(const Value& a, const Value& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  switch (a.kind) {
    case Value::Kind::Unit: return false;
    case Value::Kind::Bool: return a.b < b.b;
    case Value::Kind::Int: return a.i < b.i;
    case Value::Kind::Char: return a.c < b.c;
    case Value::Kind::Str: return a.s < b.s;
    case Value::Kind::Enum: return std::tie(a.variant, a.elems) < std::tie(b.variant, b.elems);
    default: return a.elems < b.elems;
  }
}

}  // namespace mcdc
