#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mcdc/ast.hpp"
#include "mcdc/value.hpp"

namespace mcdc {

struct Type {
  enum class Kind { Bool, Char, Int, Str, Enum, Struct, Tuple, Array, Slice, Ref, Never, Param };

  Type() = default;
  explicit Type(Kind k) : kind(k) {}

  Kind kind = Kind::Tuple;
  int bits = 32;              // Int
  bool is_signed = true;      // Int
  std::string name;           // Enum / Struct
  std::vector<TypePtr> args;  // Enum generic args, Tuple elements, Array/Slice/Ref element
  std::int64_t length = 0;    // Array; Param index
  bool is_mut = false;        // Ref

  bool is_unit() const { return kind == Kind::Tuple && args.empty(); }
  std::int64_t int_min() const;
  std::int64_t int_max() const;
  std::string str() const;
};

namespace types {
TypePtr boolean();
TypePtr character();
TypePtr integer(int bits, bool is_signed);
TypePtr str();
TypePtr unit();
TypePtr never();
TypePtr tuple(std::vector<TypePtr> elems);
TypePtr array(TypePtr elem, std::int64_t length);
TypePtr slice(TypePtr elem);
TypePtr ref(TypePtr inner, bool is_mut = false);
TypePtr enumeration(std::string name, std::vector<TypePtr> args = {});
TypePtr structure(std::string name);
TypePtr option(TypePtr payload);
TypePtr result(TypePtr ok, TypePtr err);
}  // namespace types

/// Structural equality; `&mut T` and `&T` compare equal.
bool same_type(const Type& a, const Type& b);
bool same_type(const TypePtr& a, const TypePtr& b);

/// Strips any number of reference layers.
const TypePtr& strip_refs(const TypePtr& t);

struct FieldsInfo {
  FieldShape shape = FieldShape::Unit;
  std::vector<std::string> names;
  std::vector<TypePtr> types;  // may contain Param types for built-in generics

  int index_of(const std::string& field) const;
};

struct VariantInfo {
  std::string name;
  FieldsInfo fields;
};

struct EnumInfo {
  std::string name;
  std::vector<VariantInfo> variants;
  int generic_params = 0;
  bool builtin = false;

  int index_of(const std::string& variant) const;
};

struct StructInfo {
  std::string name;
  FieldsInfo fields;
};

struct ConstInfo {
  std::string name;
  TypePtr type;
  Value value;
};

struct StaticInfo {
  std::string name;
  TypePtr type;
  Value initial;
  bool is_mut = false;
};

struct FunctionInfo {
  std::string name;
  std::vector<TypePtr> params;
  std::vector<std::string> param_names;
  TypePtr result;
  std::size_t item_index = 0;
};

/// Lengths tracked by slice value spaces. Lengths below `explicit_lengths`
/// are represented one by one; all longer slices share a tail bucket that
/// tracks the first `prefix` and last `suffix` elements.
struct SliceShape {
  int max_fixed_width = 0;
  int prefix = 0;
  int suffix = 0;

  int explicit_lengths() const { return std::max(max_fixed_width + 1, prefix + suffix); }
  friend bool operator==(const SliceShape&, const SliceShape&) = default;
};

/// Item table of a program plus the slice configuration. Built once by
/// check_program, read-only afterwards.
class TypeEnv {
 public:
  TypeEnv();

  std::map<std::string, EnumInfo> enums;
  std::map<std::string, StructInfo> structs;
  std::map<std::string, ConstInfo> consts;
  std::map<std::string, StaticInfo> statics;
  std::map<std::string, FunctionInfo> functions;
  SliceShape slice_shape;

  const EnumInfo& enum_info(const Type& enum_type) const;
  const StructInfo& struct_info(const Type& struct_type) const;
  std::vector<TypePtr> variant_fields(const Type& enum_type, int variant) const;
  std::vector<TypePtr> struct_fields(const Type& struct_type) const;
  int variant_count(const Type& enum_type) const;

  /// Resolves a type annotation; throws TypeError on unknown names.
  TypePtr resolve(const TypeExpr& t) const;

  /// Widens the slice shape so that value spaces can represent `p` exactly.
  void note_pattern(const Pattern& p);

  /// Type-aware value rendering (`Person::Passenger(3)`, `Some(0)`).
  std::string format_value(const Value& v, const TypePtr& t) const;
};

struct TypedProgram {
  Program program;
  std::shared_ptr<const TypeEnv> env;
};

/// Resolves names, types every expression and pattern, evaluates consts and
/// verifies every match is exhaustive. Throws TypeError / NonExhaustiveError.
TypedProgram check_program(Program program);

/// Types a standalone pattern against `scrutinee` (test and tooling entry
/// point). Bindings are accepted but not recorded.
void type_pattern(Pattern& pattern, const TypePtr& scrutinee, const TypeEnv& env);

/// Evaluates a literal/constructor expression (suite arguments, const
/// initializers). The expression must already be typed.
Value evaluate_constant(const Expr& e, const TypeEnv& env);

/// Types and evaluates a standalone constant expression against `expected`.
Value constant_from_source(const std::string& source, const TypePtr& expected, const TypeEnv& env);

}  // namespace mcdc
