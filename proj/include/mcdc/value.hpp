#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mcdc {

/// Runtime value of the interpreter. References are transparent: a value of
/// type `&T` is represented by the `T` value itself. Slices and arrays share
/// the Array representation; the static type decides which one it is.
struct Value {
  enum class Kind { Unit, Bool, Int, Char, Str, Enum, Struct, Tuple, Array };

  Kind kind = Kind::Unit;
  bool b = false;
  std::int64_t i = 0;
  char32_t c = 0;
  std::string s;      // string contents, or the enum variant / struct name
  int variant = -1;   // variant index for Enum
  std::vector<Value> elems;

  static Value unit() { return Value{}; }
  static Value boolean(bool v);
  static Value integer(std::int64_t v);
  static Value character(char32_t v);
  static Value string(std::string v);
  static Value enumeration(std::string variant_name, int variant_index, std::vector<Value> payload);
  static Value structure(std::string name, std::vector<Value> fields);
  static Value tuple(std::vector<Value> elems);
  static Value array(std::vector<Value> elems);

  /// Rust-like rendering without field names (`Some(3)`, `[1, 2]`, `'a'`).
  std::string str() const;
  /// Display-style rendering used by `print!` (`{}` placeholders).
  std::string display() const;

  friend bool operator==(const Value& a, const Value& b);
  friend bool operator<(const Value& a, const Value& b);
};

std::string encode_utf8(char32_t c);
std::string escape_char(char32_t c);
std::string escape_string(const std::string& s);

}  // namespace mcdc
