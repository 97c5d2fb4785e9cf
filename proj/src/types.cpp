#include "mcdc/types.hpp"

#include <algorithm>

namespace mcdc {

std::int64_t Type::int_min() const {
  return is_signed ? -(std::int64_t{1} << (bits - 1)) : 0;
}

std::int64_t Type::int_max() const {
  return is_signed ? (std::int64_t{1} << (bits - 1)) - 1 : (std::int64_t{1} << bits) - 1;
}

std::string Type::str() const {
  auto list = [](const std::vector<TypePtr>& ts) {
    std::string out;
    for (std::size_t k = 0; k < ts.size(); ++k) out += (k ? ", " : "") + ts[k]->str();
    return out;
  };
  switch (kind) {
    case Kind::Bool: return "bool";
    case Kind::Char: return "char";
    case Kind::Int: return std::string(is_signed ? "i" : "u") + std::to_string(bits);
    case Kind::Str: return "str";
    case Kind::Enum:
    case Kind::Struct: return args.empty() ? name : name + "<" + list(args) + ">";
    case Kind::Tuple: return args.size() == 1 ? "(" + args[0]->str() + ",)" : "(" + list(args) + ")";
    case Kind::Array: return "[" + args[0]->str() + "; " + std::to_string(length) + "]";
    case Kind::Slice: return "[" + args[0]->str() + "]";
    case Kind::Ref: return std::string(is_mut ? "&mut " : "&") + args[0]->str();
    case Kind::Never: return "!";
    case Kind::Param: return "T" + std::to_string(length);
  }
  return "?";
}

namespace types {
namespace {
TypePtr make(Type t) { return std::make_shared<const Type>(std::move(t)); }
}  // namespace

TypePtr boolean() {
  static const TypePtr t = make(Type{Type::Kind::Bool});
  return t;
}
TypePtr character() {
  static const TypePtr t = make(Type{Type::Kind::Char});
  return t;
}
TypePtr integer(int bits, bool is_signed) {
  Type t{Type::Kind::Int};
  t.bits = bits;
  t.is_signed = is_signed;
  return make(t);
}
TypePtr str() {
  static const TypePtr t = make(Type{Type::Kind::Str});
  return t;
}
TypePtr unit() {
  static const TypePtr t = make(Type{Type::Kind::Tuple});
  return t;
}
TypePtr never() {
  static const TypePtr t = make(Type{Type::Kind::Never});
  return t;
}
TypePtr tuple(std::vector<TypePtr> elems) {
  Type t{Type::Kind::Tuple};
  t.args = std::move(elems);
  return make(t);
}
TypePtr array(TypePtr elem, std::int64_t length) {
  Type t{Type::Kind::Array};
  t.args = {std::move(elem)};
  t.length = length;
  return make(t);
}
TypePtr slice(TypePtr elem) {
  Type t{Type::Kind::Slice};
  t.args = {std::move(elem)};
  return make(t);
}
TypePtr ref(TypePtr inner, bool is_mut) {
  Type t{Type::Kind::Ref};
  t.args = {std::move(inner)};
  t.is_mut = is_mut;
  return make(t);
}
TypePtr enumeration(std::string name, std::vector<TypePtr> args) {
  Type t{Type::Kind::Enum};
  t.name = std::move(name);
  t.args = std::move(args);
  return make(t);
}
TypePtr structure(std::string name) {
  Type t{Type::Kind::Struct};
  t.name = std::move(name);
  return make(t);
}
TypePtr option(TypePtr payload) { return enumeration("Option", {std::move(payload)}); }
TypePtr result(TypePtr ok, TypePtr err) { return enumeration("Result", {std::move(ok), std::move(err)}); }
}  // namespace types

bool same_type(const Type& a, const Type& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Type::Kind::Int: return a.bits == b.bits && a.is_signed == b.is_signed;
    case Type::Kind::Enum:
    case Type::Kind::Struct:
      if (a.name != b.name) return false;
      break;
    case Type::Kind::Array:
    case Type::Kind::Param:
      if (a.length != b.length) return false;
      break;
    default: break;
  }
  if (a.args.size() != b.args.size()) return false;
  for (std::size_t k = 0; k < a.args.size(); ++k)
    if (!same_type(*a.args[k], *b.args[k])) return false;
  return true;
}

bool same_type(const TypePtr& a, const TypePtr& b) { return same_type(*a, *b); }

const TypePtr& strip_refs(const TypePtr& t) {
  const TypePtr* cur = &t;
  while ((*cur)->kind == Type::Kind::Ref) cur = &(*cur)->args[0];
  return *cur;
}

int FieldsInfo::index_of(const std::string& field) const {
  auto it = std::find(names.begin(), names.end(), field);
  return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

int EnumInfo::index_of(const std::string& variant) const {
  for (std::size_t k = 0; k < variants.size(); ++k)
    if (variants[k].name == variant) return static_cast<int>(k);
  return -1;
}

TypeEnv::TypeEnv() {
  auto param = [](int index) {
    Type t{Type::Kind::Param};
    t.length = index;
    return std::make_shared<const Type>(t);
  };
  EnumInfo option{"Option", {}, 1, true};
  option.variants.push_back({"Some", {FieldShape::Tuple, {}, {param(0)}}});
  option.variants.push_back({"None", {}});
  enums.emplace("Option", option);

  EnumInfo result{"Result", {}, 2, true};
  result.variants.push_back({"Ok", {FieldShape::Tuple, {}, {param(0)}}});
  result.variants.push_back({"Err", {FieldShape::Tuple, {}, {param(1)}}});
  enums.emplace("Result", result);
}

const EnumInfo& TypeEnv::enum_info(const Type& enum_type) const { return enums.at(enum_type.name); }

const StructInfo& TypeEnv::struct_info(const Type& struct_type) const { return structs.at(struct_type.name); }

namespace {

TypePtr substitute(const TypePtr& t, const std::vector<TypePtr>& args) {
  if (t->kind == Type::Kind::Param) return args.at(static_cast<std::size_t>(t->length));
  if (t->args.empty()) return t;
  Type copy = *t;
  for (auto& a : copy.args) a = substitute(a, args);
  return std::make_shared<const Type>(std::move(copy));
}

}  // namespace

std::vector<TypePtr> TypeEnv::variant_fields(const Type& enum_type, int variant) const {
  const auto& info = enum_info(enum_type);
  std::vector<TypePtr> out;
  for (const auto& f : info.variants.at(static_cast<std::size_t>(variant)).fields.types)
    out.push_back(substitute(f, enum_type.args));
  return out;
}

std::vector<TypePtr> TypeEnv::struct_fields(const Type& struct_type) const {
  return struct_info(struct_type).fields.types;
}

int TypeEnv::variant_count(const Type& enum_type) const {
  return static_cast<int>(enum_info(enum_type).variants.size());
}

TypePtr TypeEnv::resolve(const TypeExpr& t) const {
  switch (t.kind) {
    case TypeExpr::Kind::Ref: return types::ref(resolve(t.args[0]), t.is_mut);
    case TypeExpr::Kind::Slice: return types::slice(resolve(t.args[0]));
    case TypeExpr::Kind::Array:
      if (t.length < 0) throw TypeError(t.span, "array length must be non-negative");
      return types::array(resolve(t.args[0]), t.length);
    case TypeExpr::Kind::Tuple: {
      std::vector<TypePtr> elems;
      for (const auto& a : t.args) elems.push_back(resolve(a));
      return types::tuple(std::move(elems));
    }
    case TypeExpr::Kind::Named: break;
  }
  static const std::map<std::string, std::pair<int, bool>> kInts = {
      {"i8", {8, true}},   {"u8", {8, false}},   {"i16", {16, true}},
      {"u16", {16, false}}, {"i32", {32, true}}, {"u32", {32, false}}, {"usize", {32, false}},
  };
  auto no_args = [&] {
    if (!t.args.empty()) throw TypeError(t.span, "type `" + t.name + "` takes no generic arguments");
  };
  if (auto it = kInts.find(t.name); it != kInts.end()) {
    no_args();
    return types::integer(it->second.first, it->second.second);
  }
  if (t.name == "bool") return no_args(), types::boolean();
  if (t.name == "char") return no_args(), types::character();
  if (t.name == "str") return no_args(), types::str();
  if (auto it = enums.find(t.name); it != enums.end()) {
    if (static_cast<int>(t.args.size()) != it->second.generic_params)
      throw TypeError(t.span, "wrong number of generic arguments for `" + t.name + "`");
    std::vector<TypePtr> args;
    for (const auto& a : t.args) args.push_back(resolve(a));
    return types::enumeration(t.name, std::move(args));
  }
  if (structs.count(t.name)) {
    no_args();
    return types::structure(t.name);
  }
  throw TypeError(t.span, "unknown type `" + t.name + "`");
}

void TypeEnv::note_pattern(const Pattern& p) {
  if (p.kind == PatternKind::Slice) {
    int rest_at = -1;
    for (std::size_t k = 0; k < p.children.size(); ++k) {
      const Pattern& c = p.children[k];
      bool is_rest = c.kind == PatternKind::Rest ||
                     (c.kind == PatternKind::Identifier && !c.children.empty() && c.children[0].kind == PatternKind::Rest);
      if (is_rest) rest_at = static_cast<int>(k);
    }
    int n = static_cast<int>(p.children.size());
    if (rest_at < 0) {
      slice_shape.max_fixed_width = std::max(slice_shape.max_fixed_width, n);
    } else {
      slice_shape.prefix = std::max(slice_shape.prefix, rest_at);
      slice_shape.suffix = std::max(slice_shape.suffix, n - rest_at - 1);
    }
  }
  for (const auto& c : p.children) note_pattern(c);
}

std::string TypeEnv::format_value(const Value& v, const TypePtr& type) const {
  const TypePtr& t = strip_refs(type);
  auto list = [&](const std::vector<Value>& elems, const std::vector<TypePtr>& ts) {
    std::string out;
    for (std::size_t k = 0; k < elems.size(); ++k) out += (k ? ", " : "") + format_value(elems[k], ts[k]);
    return out;
  };
  switch (t->kind) {
    case Type::Kind::Enum: {
      const auto& info = enum_info(*t);
      const auto& variant = info.variants.at(static_cast<std::size_t>(v.variant));
      std::string head = info.builtin ? variant.name : info.name + "::" + variant.name;
      auto fields = variant_fields(*t, v.variant);
      if (variant.fields.shape == FieldShape::Unit) return head;
      if (variant.fields.shape == FieldShape::Tuple) return head + "(" + list(v.elems, fields) + ")";
      std::string out = head + " {";
      for (std::size_t k = 0; k < v.elems.size(); ++k)
        out += (k ? ", " : " ") + variant.fields.names[k] + ": " + format_value(v.elems[k], fields[k]);
      return out + " }";
    }
    case Type::Kind::Struct: {
      const auto& info = struct_info(*t);
      if (info.fields.shape == FieldShape::Unit) return info.name;
      if (info.fields.shape == FieldShape::Tuple) return info.name + "(" + list(v.elems, info.fields.types) + ")";
      std::string out = info.name + " {";
      for (std::size_t k = 0; k < v.elems.size(); ++k)
        out += (k ? ", " : " ") + info.fields.names[k] + ": " + format_value(v.elems[k], info.fields.types[k]);
      return out + " }";
    }
    case Type::Kind::Tuple: {
      if (v.elems.size() == 1) return "(" + format_value(v.elems[0], t->args[0]) + ",)";
      return "(" + list(v.elems, t->args) + ")";
    }
    case Type::Kind::Array:
    case Type::Kind::Slice: {
      std::vector<TypePtr> ts(v.elems.size(), t->args[0]);
      return "[" + list(v.elems, ts) + "]";
    }
    default: return v.str();
  }
}

}  // namespace mcdc
