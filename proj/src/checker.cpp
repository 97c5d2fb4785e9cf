#include <algorithm>
#include <functional>
#include <set>

#include "mcdc/format.hpp"
#include "mcdc/parser.hpp"
#include "mcdc/types.hpp"
#include "mcdc/value_space.hpp"

namespace mcdc {

namespace {

bool is_int(const TypePtr& t) { return strip_refs(t)->kind == Type::Kind::Int; }

/// Assignability with transparent references and the `[T; n]` to `[T]`
/// unsizing coercion.
bool coerces(const TypePtr& actual, const TypePtr& expected) {
  const TypePtr& a = strip_refs(actual);
  const TypePtr& e = strip_refs(expected);
  if (a->kind == Type::Kind::Never) return true;
  if (e->kind == Type::Kind::Slice && (a->kind == Type::Kind::Array || a->kind == Type::Kind::Slice))
    return coerces(a->args[0], e->args[0]) && coerces(e->args[0], a->args[0]);
  if (a->kind != e->kind) return false;
  switch (a->kind) {
    case Type::Kind::Int: return a->bits == e->bits && a->is_signed == e->is_signed;
    case Type::Kind::Enum:
    case Type::Kind::Struct:
      if (a->name != e->name) return false;
      break;
    case Type::Kind::Array:
      if (a->length != e->length) return false;
      break;
    default: break;
  }
  if (a->args.size() != e->args.size()) return false;
  for (std::size_t k = 0; k < a->args.size(); ++k)
    if (!coerces(a->args[k], e->args[k]) || !coerces(e->args[k], a->args[k])) return false;
  return true;
}

std::string quoted(const TypePtr& t) { return "`" + t->str() + "`"; }

[[noreturn]] void mismatch(const SourceSpan& span, const TypePtr& expected, const TypePtr& actual) {
  throw TypeError(span, "mismatched types: expected " + quoted(expected) + ", found " + quoted(actual));
}

bool is_rest_child(const Pattern& c) {
  return c.kind == PatternKind::Rest ||
         (c.kind == PatternKind::Identifier && !c.children.empty() && c.children[0].kind == PatternKind::Rest);
}

void note_all_patterns(const Expr& e, TypeEnv& env);

void note_block_patterns(const std::vector<Stmt>& stmts, TypeEnv& env) {
  for (const auto& s : stmts) {
    if (s.kind == Stmt::Kind::Let) {
      env.note_pattern(s.pattern);
      if (s.init) note_all_patterns(*s.init, env);
      if (s.else_block) note_all_patterns(*s.else_block, env);
    } else {
      note_all_patterns(s.expr, env);
    }
  }
}

void note_all_patterns(const Expr& e, TypeEnv& env) {
  for (const auto& p : e.pattern) env.note_pattern(p);
  for (const auto& k : e.kids) note_all_patterns(k, env);
  note_block_patterns(e.stmts, env);
  for (const auto& arm : e.arms) {
    env.note_pattern(arm.pattern);
    if (arm.guard) note_all_patterns(*arm.guard, env);
    note_all_patterns(arm.body, env);
  }
}

struct Local {
  TypePtr type;
  bool is_mut = false;
};

using BindingSink = std::function<void(const Pattern&, TypePtr)>;

// ---------------------------------------------------------------------------
// Pattern typing
// ---------------------------------------------------------------------------

class PatternTyper {
 public:
  PatternTyper(const TypeEnv& env, BindingSink sink) : env_(env), sink_(std::move(sink)) {}

  void type(Pattern& p, const TypePtr& scrutinee) {
    std::set<std::string> names;
    visit(p, scrutinee, names);
  }

 private:
  const TypeEnv& env_;
  BindingSink sink_;

  void bind(const Pattern& p, const TypePtr& t, std::set<std::string>& names) {
    if (!names.insert(p.name).second)
      throw TypeError(p.span, "identifier `" + p.name + "` is bound more than once in the same pattern");
    if (sink_) sink_(p, t);
  }

  // Resolves a constructor path to (enum type + variant) or a struct type.
  struct Ctor {
    TypePtr type;
    int variant = -1;
    const FieldsInfo* fields = nullptr;
  };

  Ctor resolve_ctor(const Pattern& p, const TypePtr& scrutinee) {
    const TypePtr& t = strip_refs(scrutinee);
    const Path& path = p.path;
    Ctor c;
    if (path.size() == 1 && (path[0] == "Some" || path[0] == "None" || path[0] == "Ok" || path[0] == "Err")) {
      std::string enum_name = path[0] == "Some" || path[0] == "None" ? "Option" : "Result";
      if (t->kind != Type::Kind::Enum || t->name != enum_name)
        throw TypeError(p.span, "pattern `" + path[0] + "` does not match scrutinee type " + quoted(t));
      const auto& info = env_.enum_info(*t);
      c.type = t;
      c.variant = info.index_of(path[0]);
      c.fields = &info.variants[static_cast<std::size_t>(c.variant)].fields;
      return c;
    }
    if (path.size() == 2) {
      auto it = env_.enums.find(path[0]);
      if (it == env_.enums.end() || it->second.builtin)
        throw TypeError(p.span, "unknown enum `" + path[0] + "`");
      int v = it->second.index_of(path[1]);
      if (v < 0) throw TypeError(p.span, "enum `" + path[0] + "` has no variant `" + path[1] + "`");
      if (t->kind != Type::Kind::Enum || t->name != path[0])
        throw TypeError(p.span, "pattern of type `" + path[0] + "` does not match scrutinee type " + quoted(t));
      c.type = t;
      c.variant = v;
      c.fields = &it->second.variants[static_cast<std::size_t>(v)].fields;
      return c;
    }
    if (path.size() == 1) {
      auto it = env_.structs.find(path[0]);
      if (it == env_.structs.end()) throw TypeError(p.span, "unknown struct or variant `" + path[0] + "`");
      if (t->kind != Type::Kind::Struct || t->name != path[0])
        throw TypeError(p.span, "pattern of type `" + path[0] + "` does not match scrutinee type " + quoted(t));
      c.type = t;
      c.fields = &it->second.fields;
      return c;
    }
    throw TypeError(p.span, "unsupported path `" + path_str(path) + "` in pattern");
  }

  std::vector<TypePtr> ctor_field_types(const Ctor& c) {
    return c.variant >= 0 ? env_.variant_fields(*c.type, c.variant) : env_.struct_fields(*c.type);
  }

  // Positional children with at most one rest.
  void positional(Pattern& p, const std::vector<TypePtr>& ts, std::set<std::string>& names, const char* what) {
    int rest = -1;
    for (std::size_t k = 0; k < p.children.size(); ++k) {
      if (p.children[k].kind == PatternKind::Rest) {
        if (rest >= 0) throw TypeError(p.children[k].span, "`..` can only be used once per pattern");
        rest = static_cast<int>(k);
      }
    }
    std::size_t n = p.children.size();
    if (rest < 0) {
      if (n != ts.size())
        throw TypeError(p.span, std::string("this ") + what + " pattern has " + std::to_string(n) +
                                    " fields, but the type has " + std::to_string(ts.size()));
      for (std::size_t k = 0; k < n; ++k) visit(p.children[k], ts[k], names);
      return;
    }
    if (n - 1 > ts.size())
      throw TypeError(p.span, std::string("this ") + what + " pattern has too many fields for the type");
    auto r = static_cast<std::size_t>(rest);
    for (std::size_t k = 0; k < r; ++k) visit(p.children[k], ts[k], names);
    p.children[r].type = types::unit();
    std::size_t suffix = n - r - 1;
    for (std::size_t j = 0; j < suffix; ++j) visit(p.children[r + 1 + j], ts[ts.size() - suffix + j], names);
  }

  void check_literal(const Pattern& p, const Literal& lit, const TypePtr& t) {
    auto fail = [&] { throw TypeError(p.span, "literal `" + lit.str() + "` does not match type " + quoted(t)); };
    switch (lit.kind) {
      case Literal::Kind::Bool:
        if (t->kind != Type::Kind::Bool) fail();
        break;
      case Literal::Kind::Int:
        if (t->kind != Type::Kind::Int) fail();
        if (lit.i < t->int_min() || lit.i > t->int_max())
          throw TypeError(p.span, "literal `" + lit.str() + "` out of range for " + quoted(t));
        break;
      case Literal::Kind::Char:
        if (t->kind != Type::Kind::Char) fail();
        break;
      case Literal::Kind::Str:
        if (t->kind != Type::Kind::Str) fail();
        break;
    }
  }

  void visit(Pattern& p, const TypePtr& scrutinee, std::set<std::string>& names) {
    // Match ergonomics: non-reference patterns see through references.
    bool transparent = p.kind == PatternKind::Identifier || p.kind == PatternKind::Wildcard ||
                       p.kind == PatternKind::Rest || p.kind == PatternKind::Reference;
    const TypePtr& t = transparent ? scrutinee : strip_refs(scrutinee);
    p.type = t;

    switch (p.kind) {
      case PatternKind::Wildcard:
      case PatternKind::Rest: return;

      case PatternKind::Identifier: {
        if (p.ambiguous && p.children.empty() && !p.by_ref && !p.is_mut && resolve_ambiguous(p, scrutinee)) return;
        p.meaning = PatternMeaning::Binding;
        bind(p, p.by_ref ? types::ref(t, p.is_mut) : t, names);
        if (!p.children.empty()) visit(p.children[0], t, names);
        return;
      }

      case PatternKind::Literal: check_literal(p, p.literal, t); return;

      case PatternKind::Range: {
        if (t->kind != Type::Kind::Int && t->kind != Type::Kind::Char)
          throw TypeError(p.span, "range patterns require an integer or char scrutinee, found " + quoted(t));
        if (!p.lo && !p.hi) throw TypeError(p.span, "range pattern needs a bound");
        if (p.lo) check_literal(p, *p.lo, t);
        if (p.hi) check_literal(p, *p.hi, t);
        auto scalar = [](const Literal& l) {
          return l.kind == Literal::Kind::Char ? static_cast<std::int64_t>(l.c) : l.i;
        };
        if (p.lo && p.hi) {
          std::int64_t lo = scalar(*p.lo), hi = scalar(*p.hi);
          if (p.inclusive ? lo > hi : lo >= hi)
            throw TypeError(p.span, "lower range bound must be less than or equal to the upper bound");
        }
        if (!p.lo && p.hi && !p.inclusive) {
          std::int64_t min = t->kind == Type::Kind::Char ? 0 : t->int_min();
          if (scalar(*p.hi) <= min) throw TypeError(p.span, "exclusive range pattern `..` below the type minimum is empty");
        }
        return;
      }

      case PatternKind::Reference: {
        if (scrutinee->kind != Type::Kind::Ref)
          throw TypeError(p.span, "reference pattern against non-reference type " + quoted(scrutinee));
        if (p.is_mut && !scrutinee->is_mut)
          throw TypeError(p.span, "`&mut` pattern against shared reference " + quoted(scrutinee));
        visit(p.children[0], scrutinee->args[0], names);
        return;
      }

      case PatternKind::Grouped: visit(p.children[0], scrutinee, names); return;

      case PatternKind::Tuple: {
        if (t->kind != Type::Kind::Tuple) throw TypeError(p.span, "tuple pattern against " + quoted(t));
        positional(p, t->args, names, "tuple");
        return;
      }

      case PatternKind::TupleStruct: {
        Ctor c = resolve_ctor(p, t);
        if (c.fields->shape != FieldShape::Tuple)
          throw TypeError(p.span, "`" + path_str(p.path) + "` is not a tuple struct or tuple variant");
        p.meaning = c.variant >= 0 ? PatternMeaning::EnumVariant : PatternMeaning::Struct;
        p.variant = c.variant;
        positional(p, ctor_field_types(c), names, "tuple struct");
        return;
      }

      case PatternKind::Struct: {
        Ctor c = resolve_ctor(p, t);
        if (c.fields->shape != FieldShape::Named && !(c.fields->shape == FieldShape::Unit && p.children.empty()))
          throw TypeError(p.span, "`" + path_str(p.path) + "` has no named fields");
        p.meaning = c.variant >= 0 ? PatternMeaning::EnumVariant : PatternMeaning::Struct;
        p.variant = c.variant;
        auto ts = ctor_field_types(c);
        p.field_index.clear();
        std::set<int> seen;
        for (std::size_t k = 0; k < p.children.size(); ++k) {
          int idx = c.fields->index_of(p.fields[k]);
          if (idx < 0) throw TypeError(p.children[k].span, "no field `" + p.fields[k] + "` in `" + path_str(p.path) + "`");
          if (!seen.insert(idx).second)
            throw TypeError(p.children[k].span, "field `" + p.fields[k] + "` bound more than once");
          p.field_index.push_back(idx);
          visit(p.children[k], ts[static_cast<std::size_t>(idx)], names);
        }
        if (!p.has_rest && seen.size() != ts.size())
          throw TypeError(p.span, "pattern does not mention all fields of `" + path_str(p.path) + "`; add `..`");
        return;
      }

      case PatternKind::Path: {
        Ctor c = resolve_ctor(p, t);
        if (c.fields->shape != FieldShape::Unit)
          throw TypeError(p.span, "`" + path_str(p.path) + "` expects fields");
        p.meaning = c.variant >= 0 ? PatternMeaning::EnumVariant : PatternMeaning::UnitStruct;
        p.variant = c.variant;
        return;
      }

      case PatternKind::Slice: {
        if (t->kind != Type::Kind::Array && t->kind != Type::Kind::Slice)
          throw TypeError(p.span, "slice pattern against " + quoted(t));
        const TypePtr& elem = t->args[0];
        int rest = -1;
        for (std::size_t k = 0; k < p.children.size(); ++k)
          if (is_rest_child(p.children[k])) rest = static_cast<int>(k);
        auto fixed = static_cast<std::int64_t>(p.children.size()) - (rest >= 0 ? 1 : 0);
        if (t->kind == Type::Kind::Array) {
          if (rest < 0 && fixed != t->length)
            throw TypeError(p.span, "pattern requires " + std::to_string(fixed) + " elements but array has " +
                                        std::to_string(t->length));
          if (rest >= 0 && fixed > t->length)
            throw TypeError(p.span, "pattern requires at least " + std::to_string(fixed) +
                                        " elements but array has " + std::to_string(t->length));
        }
        for (std::size_t k = 0; k < p.children.size(); ++k) {
          Pattern& c = p.children[k];
          if (static_cast<int>(k) == rest) {
            TypePtr rest_type = t->kind == Type::Kind::Array ? types::array(elem, t->length - fixed)
                                                              : types::slice(elem);
            c.type = rest_type;
            if (c.kind == PatternKind::Identifier) {
              c.meaning = PatternMeaning::Binding;
              c.children[0].type = rest_type;
              bind(c, c.by_ref ? types::ref(rest_type, c.is_mut) : types::ref(rest_type), names);
            }
          } else {
            visit(c, elem, names);
          }
        }
        return;
      }

      case PatternKind::Or: {
        std::optional<std::set<std::string>> expected;
        for (auto& alt : p.children) {
          std::set<std::string> alt_names;
          visit(alt, scrutinee, alt_names);
          if (expected && *expected != alt_names)
            throw TypeError(alt.span, "variables must be bound in all alternatives of an or-pattern");
          expected = alt_names;
        }
        for (const auto& n : *expected)
          if (!names.insert(n).second) throw TypeError(p.span, "identifier `" + n + "` is bound more than once");
        return;
      }
    }
  }

  // Bare identifier naming a const, unit struct or `None`: rewrite to a Path.
  bool resolve_ambiguous(Pattern& p, const TypePtr& scrutinee) {
    const TypePtr& t = strip_refs(scrutinee);
    if (auto it = env_.consts.find(p.name); it != env_.consts.end()) {
      const ConstInfo& c = it->second;
      if (!coerces(c.type, t)) mismatch(p.span, t, c.type);
      if (strip_refs(c.type)->kind == Type::Kind::Slice || strip_refs(c.type)->kind == Type::Kind::Str)
        throw TypeError(p.span, "constants of type " + quoted(c.type) + " cannot be used as patterns");
      p.kind = PatternKind::Path;
      p.path = {p.name};
      p.type = t;
      p.meaning = PatternMeaning::Const;
      p.const_value = std::make_shared<const Value>(c.value);
      return true;
    }
    auto st = env_.structs.find(p.name);
    bool unit_struct = st != env_.structs.end() && st->second.fields.shape == FieldShape::Unit;
    if (unit_struct || p.name == "None") {
      p.kind = PatternKind::Path;
      p.path = {p.name};
      p.type = t;
      Ctor c = resolve_ctor(p, t);
      p.meaning = c.variant >= 0 ? PatternMeaning::EnumVariant : PatternMeaning::UnitStruct;
      p.variant = c.variant;
      return true;
    }
    return false;
  }
};

// ---------------------------------------------------------------------------
// Program checking
// ---------------------------------------------------------------------------

class Checker {
 public:
  explicit Checker(TypeEnv& env) : env_(env) {}

  void check(Program& program) {
    collect_types(program);
    collect_values(program);
    for (auto& item : program.items) {
      if (auto* f = std::get_if<FnDef>(&item)) note_all_patterns(f->body, env_);
    }
    for (auto& item : program.items) {
      if (auto* c = std::get_if<ConstDef>(&item)) ensure_const(c->name);
    }
    for (auto& item : program.items) {
      if (auto* s = std::get_if<StaticDef>(&item)) check_static(*s);
    }
    for (auto& item : program.items) {
      if (auto* f = std::get_if<FnDef>(&item)) check_fn(*f);
    }
  }

  // Entry point for constant expressions outside a program body.
  TypePtr check_constant_expr(Expr& e, const TypePtr& expected) {
    in_const_ = true;
    scopes_.emplace_back();
    TypePtr t = expr(e, expected);
    scopes_.pop_back();
    in_const_ = false;
    return t;
  }

 private:
  TypeEnv& env_;
  std::vector<std::map<std::string, Local>> scopes_;
  TypePtr return_type_;
  bool in_const_ = false;
  std::map<std::string, ConstDef*> const_defs_;
  std::set<std::string> consts_in_progress_;

  // ---- items --------------------------------------------------------------

  void collect_types(Program& program) {
    std::set<std::string> type_names = {"Option", "Result"};
    for (auto& item : program.items) {
      if (auto* e = std::get_if<EnumDef>(&item)) {
        if (!type_names.insert(e->name).second) throw TypeError(e->span, "type `" + e->name + "` is defined more than once");
        if (e->variants.empty()) throw TypeError(e->span, "enum `" + e->name + "` must have at least one variant");
        env_.enums[e->name] = EnumInfo{e->name, {}, 0, false};
      } else if (auto* s = std::get_if<StructDef>(&item)) {
        if (!type_names.insert(s->name).second) throw TypeError(s->span, "type `" + s->name + "` is defined more than once");
        env_.structs[s->name] = StructInfo{s->name, {}};
      }
    }
    auto fields = [&](FieldShape shape, const std::vector<std::string>& names, const std::vector<TypeExpr>& ts,
                      const SourceSpan& span) {
      FieldsInfo info;
      info.shape = shape;
      info.names = names;
      std::set<std::string> seen;
      for (const auto& n : names)
        if (!seen.insert(n).second) throw TypeError(span, "field `" + n + "` is declared more than once");
      for (const auto& t : ts) info.types.push_back(env_.resolve(t));
      return info;
    };
    for (auto& item : program.items) {
      if (auto* e = std::get_if<EnumDef>(&item)) {
        auto& info = env_.enums[e->name];
        std::set<std::string> seen;
        for (const auto& v : e->variants) {
          if (!seen.insert(v.name).second) throw TypeError(v.span, "variant `" + v.name + "` is declared more than once");
          info.variants.push_back({v.name, fields(v.shape, v.field_names, v.field_types, v.span)});
        }
      } else if (auto* s = std::get_if<StructDef>(&item)) {
        env_.structs[s->name].fields = fields(s->shape, s->field_names, s->field_types, s->span);
      }
    }
    reject_recursive_types(program);
  }

  void reject_recursive_types(const Program& program) {
    std::map<std::string, std::set<std::string>> edges;
    std::function<void(const TypePtr&, std::set<std::string>&)> refs = [&](const TypePtr& t, std::set<std::string>& out) {
      if ((t->kind == Type::Kind::Enum || t->kind == Type::Kind::Struct) &&
          !(t->kind == Type::Kind::Enum && env_.enums.at(t->name).builtin))
        out.insert(t->name);
      for (const auto& a : t->args) refs(a, out);
    };
    for (const auto& [name, info] : env_.enums)
      for (const auto& v : info.variants)
        for (const auto& t : v.fields.types) refs(t, edges[name]);
    for (const auto& [name, info] : env_.structs)
      for (const auto& t : info.fields.types) refs(t, edges[name]);

    std::map<std::string, int> state;
    std::function<bool(const std::string&)> cyclic = [&](const std::string& n) {
      int& s = state[n];
      if (s == 1) return true;
      if (s == 2) return false;
      s = 1;
      for (const auto& m : edges[n])
        if (cyclic(m)) return true;
      state[n] = 2;
      return false;
    };
    for (const auto& item : program.items) {
      if (std::holds_alternative<EnumDef>(item) || std::holds_alternative<StructDef>(item)) {
        if (cyclic(item_name(item)))
          throw TypeError(item_span(item), "recursive type `" + item_name(item) + "` has infinite size");
      }
    }
  }

  void collect_values(Program& program) {
    std::set<std::string> value_names;
    for (std::size_t k = 0; k < program.items.size(); ++k) {
      Item& item = program.items[k];
      if (std::holds_alternative<EnumDef>(item) || std::holds_alternative<StructDef>(item)) continue;
      if (!value_names.insert(item_name(item)).second)
        throw TypeError(item_span(item), "`" + item_name(item) + "` is defined more than once");
      if (auto* c = std::get_if<ConstDef>(&item)) {
        const_defs_[c->name] = c;
      } else if (auto* s = std::get_if<StaticDef>(&item)) {
        env_.statics[s->name] = StaticInfo{s->name, env_.resolve(s->type), Value{}, s->is_mut};
      } else if (auto* f = std::get_if<FnDef>(&item)) {
        FunctionInfo info;
        info.name = f->name;
        info.item_index = k;
        std::set<std::string> seen;
        for (const auto& p : f->params) {
          if (!seen.insert(p.name).second) throw TypeError(p.span, "parameter `" + p.name + "` is declared twice");
          info.params.push_back(env_.resolve(p.type));
          info.param_names.push_back(p.name);
        }
        info.result = f->return_type ? env_.resolve(*f->return_type) : types::unit();
        env_.functions[f->name] = info;
      }
    }
  }

  void ensure_const(const std::string& name) {
    if (env_.consts.count(name)) return;
    ConstDef* def = const_defs_.at(name);
    if (!consts_in_progress_.insert(name).second)
      throw TypeError(def->span, "cycle detected when evaluating constant `" + name + "`");
    TypePtr t = env_.resolve(def->type);
    auto saved_scopes = std::move(scopes_);
    scopes_.clear();
    check_constant_expr(def->value, t);
    scopes_ = std::move(saved_scopes);
    env_.consts[name] = ConstInfo{name, t, evaluate_constant(def->value, env_)};
    consts_in_progress_.erase(name);
  }

  void check_static(StaticDef& s) {
    StaticInfo& info = env_.statics.at(s.name);
    check_constant_expr(s.value, info.type);
    info.initial = evaluate_constant(s.value, env_);
  }

  void check_fn(FnDef& f) {
    const FunctionInfo& info = env_.functions.at(f.name);
    return_type_ = info.result;
    scopes_.clear();
    scopes_.emplace_back();
    for (std::size_t k = 0; k < f.params.size(); ++k)
      scopes_.back()[f.params[k].name] = Local{info.params[k], f.params[k].is_mut};
    TypePtr body = expr(f.body, info.result);
    if (!coerces(body, info.result)) mismatch(f.body.span, info.result, body);
    scopes_.clear();
    return_type_.reset();
  }

  // ---- scopes -------------------------------------------------------------

  const Local* lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (auto f = it->find(name); f != it->end()) return &f->second;
    return nullptr;
  }

  void type_pattern_binding(Pattern& p, const TypePtr& scrutinee) {
    PatternTyper typer(env_, [&](const Pattern& b, TypePtr t) { scopes_.back()[b.name] = Local{std::move(t), b.is_mut}; });
    typer.type(p, scrutinee);
  }

  // ---- expressions --------------------------------------------------------

  TypePtr expect_type(Expr& e, const TypePtr& expected) {
    TypePtr t = expr(e, expected);
    if (!coerces(t, expected)) mismatch(e.span, expected, t);
    return t;
  }

  static bool is_int_literal(const Expr& e) {
    if (e.kind == ExprKind::Literal) return e.literal.kind == Literal::Kind::Int;
    if (e.kind == ExprKind::Unary && e.unary_op == UnaryOp::Neg) return is_int_literal(e.kids[0]);
    return false;
  }

  TypePtr expr(Expr& e, const TypePtr& expected) {
    e.type = expr_inner(e, expected);
    return e.type;
  }

  TypePtr join(const SourceSpan& span, const TypePtr& a, const TypePtr& b) {
    if (a->kind == Type::Kind::Never) return b;
    if (b->kind == Type::Kind::Never) return a;
    if (coerces(b, a)) return a;
    if (coerces(a, b)) return b;
    mismatch(span, a, b);
  }

  TypePtr expr_inner(Expr& e, const TypePtr& expected) {
    const TypePtr exp = expected ? strip_refs(expected) : nullptr;
    switch (e.kind) {
      case ExprKind::Literal: return literal(e, exp);
      case ExprKind::Path: return path_expr(e, exp);
      case ExprKind::Tuple: {
        std::vector<TypePtr> elems;
        for (std::size_t k = 0; k < e.kids.size(); ++k) {
          TypePtr hint = exp && exp->kind == Type::Kind::Tuple && k < exp->args.size() ? exp->args[k] : nullptr;
          elems.push_back(expr(e.kids[k], hint));
        }
        return types::tuple(std::move(elems));
      }
      case ExprKind::Array: {
        TypePtr elem = exp && (exp->kind == Type::Kind::Array || exp->kind == Type::Kind::Slice) ? exp->args[0] : nullptr;
        if (e.kids.empty() && !elem) throw TypeError(e.span, "cannot infer the element type of an empty array");
        for (auto& k : e.kids) {
          TypePtr t = expr(k, elem);
          if (!elem) elem = t;
          else if (!coerces(t, elem)) mismatch(k.span, elem, t);
        }
        return types::array(elem, static_cast<std::int64_t>(e.kids.size()));
      }
      case ExprKind::StructLit: return struct_literal(e);
      case ExprKind::Call: return call(e, exp);
      case ExprKind::MethodCall: {
        TypePtr recv = strip_refs(expr(e.kids[0], nullptr));
        if (e.name == "len" && e.kids.size() == 1 &&
            (recv->kind == Type::Kind::Array || recv->kind == Type::Kind::Slice))
          return types::integer(32, false);
        throw TypeError(e.span, "no method `" + e.name + "` on type " + quoted(recv));
      }
      case ExprKind::Field: return field(e);
      case ExprKind::Index: {
        TypePtr base = strip_refs(expr(e.kids[0], nullptr));
        if (base->kind != Type::Kind::Array && base->kind != Type::Kind::Slice)
          throw TypeError(e.span, "cannot index into a value of type " + quoted(base));
        TypePtr idx = expr(e.kids[1], types::integer(32, false));
        if (!is_int(idx)) throw TypeError(e.kids[1].span, "index must be an integer, found " + quoted(idx));
        return base->args[0];
      }
      case ExprKind::Unary: {
        if (e.unary_op == UnaryOp::Not) return expect_type(e.kids[0], types::boolean());
        TypePtr t = expr(e.kids[0], exp && exp->kind == Type::Kind::Int ? exp : nullptr);
        if (!is_int(t) || !strip_refs(t)->is_signed)
          throw TypeError(e.span, "cannot negate a value of type " + quoted(t));
        if (e.kids[0].kind == ExprKind::Literal) {
          const TypePtr& it = strip_refs(t);
          if (-e.kids[0].literal.i < it->int_min())
            throw TypeError(e.span, "literal out of range for " + quoted(it));
        }
        return strip_refs(t);
      }
      case ExprKind::Binary: return binary(e, exp);
      case ExprKind::Assign: {
        TypePtr lhs = expr(e.kids[0], nullptr);
        check_place(e.kids[0]);
        if (e.compound) {
          if (!is_int(lhs)) throw TypeError(e.span, "compound assignment requires an integer, found " + quoted(lhs));
          expect_type(e.kids[1], strip_refs(lhs));
        } else {
          expect_type(e.kids[1], lhs);
        }
        return types::unit();
      }
      case ExprKind::Ref: {
        TypePtr inner_hint = expected && expected->kind == Type::Kind::Ref ? expected->args[0] : exp;
        TypePtr inner = expr(e.kids[0], inner_hint);
        if (e.is_mut) check_place(e.kids[0]);
        return types::ref(inner, e.is_mut);
      }
      case ExprKind::Deref: {
        TypePtr inner = expr(e.kids[0], nullptr);
        if (inner->kind != Type::Kind::Ref) throw TypeError(e.span, "type " + quoted(inner) + " cannot be dereferenced");
        return inner->args[0];
      }
      case ExprKind::If: {
        expect_type(e.kids[0], types::boolean());
        if (e.kids.size() == 2) {
          TypePtr then = expr(e.kids[1], types::unit());
          if (!coerces(then, types::unit())) mismatch(e.kids[1].span, types::unit(), then);
          return types::unit();
        }
        TypePtr then = expr(e.kids[1], expected);
        TypePtr other = expr(e.kids[2], expected ? expected : then);
        return join(e.span, then, other);
      }
      case ExprKind::IfLet: {
        TypePtr scrutinee = expr(e.kids[0], nullptr);
        scopes_.emplace_back();
        type_pattern_binding(e.pattern[0], scrutinee);
        TypePtr then = expr(e.kids[1], e.kids.size() == 2 ? types::unit() : expected);
        scopes_.pop_back();
        if (e.kids.size() == 2) {
          if (!coerces(then, types::unit())) mismatch(e.kids[1].span, types::unit(), then);
          return types::unit();
        }
        TypePtr other = expr(e.kids[2], expected ? expected : then);
        return join(e.span, then, other);
      }
      case ExprKind::Match: return match(e, expected);
      case ExprKind::Block: return block(e, expected);
      case ExprKind::While: {
        expect_type(e.kids[0], types::boolean());
        TypePtr body = expr(e.kids[1], types::unit());
        if (!coerces(body, types::unit())) mismatch(e.kids[1].span, types::unit(), body);
        return types::unit();
      }
      case ExprKind::Return: {
        if (in_const_ || !return_type_) throw TypeError(e.span, "`return` outside of a function body");
        if (e.kids.empty()) {
          if (!return_type_->is_unit()) mismatch(e.span, return_type_, types::unit());
        } else {
          expect_type(e.kids[0], return_type_);
        }
        return types::never();
      }
      case ExprKind::QuestionMark: return question_mark(e);
      case ExprKind::Print:
      case ExprKind::Panic: {
        if (in_const_) throw TypeError(e.span, "`" + e.name + "!` is not allowed in a constant");
        std::size_t holes = 0;
        for (const auto& piece : parse_format(e.literal.s, e.span)) {
          if (piece.kind == FormatPiece::Kind::Next) ++holes;
          if (piece.kind == FormatPiece::Kind::Named && !lookup(piece.text) && !env_.consts.count(piece.text) &&
              !env_.statics.count(piece.text))
            throw TypeError(e.span, "cannot find value `" + piece.text + "` in this scope");
        }
        if (holes != e.kids.size())
          throw TypeError(e.span, std::to_string(holes) + " positional placeholders but " +
                                      std::to_string(e.kids.size()) + " arguments");
        for (auto& k : e.kids) expr(k, nullptr);
        return e.kind == ExprKind::Panic ? types::never() : types::unit();
      }
    }
    throw TypeError(e.span, "unsupported expression");
  }

  TypePtr literal(Expr& e, const TypePtr& exp) {
    switch (e.literal.kind) {
      case Literal::Kind::Bool: return types::boolean();
      case Literal::Kind::Char: return types::character();
      case Literal::Kind::Str: return types::ref(types::str());
      case Literal::Kind::Int: {
        TypePtr t = exp && exp->kind == Type::Kind::Int ? exp : types::integer(32, true);
        // Negated literals are range-checked by the enclosing Unary node.
        if (e.literal.i > t->int_max() + (t->is_signed ? 1 : 0))
          throw TypeError(e.span, "literal `" + e.literal.str() + "` out of range for " + quoted(t));
        return t;
      }
    }
    return types::unit();
  }

  TypePtr path_expr(Expr& e, const TypePtr& exp) {
    const Path& path = e.path;
    if (path.size() == 1) {
      const std::string& name = path[0];
      if (!in_const_) {
        if (const Local* l = lookup(name)) {
          e.target = ExprTarget::Local;
          return l->type;
        }
      }
      if (const_defs_.count(name) || env_.consts.count(name)) {
        if (!env_.consts.count(name)) ensure_const(name);
        e.target = ExprTarget::Const;
        return env_.consts.at(name).type;
      }
      if (auto it = env_.statics.find(name); it != env_.statics.end()) {
        if (in_const_) throw TypeError(e.span, "static `" + name + "` cannot be used in a constant expression");
        e.target = ExprTarget::Static;
        return it->second.type;
      }
      if (name == "None") {
        if (!exp || exp->kind != Type::Kind::Enum || exp->name != "Option")
          throw TypeError(e.span, "cannot infer the type of `None`; add a type annotation");
        e.target = ExprTarget::EnumVariant;
        e.variant = 1;
        return exp;
      }
      if (auto it = env_.structs.find(name); it != env_.structs.end() && it->second.fields.shape == FieldShape::Unit) {
        e.target = ExprTarget::Struct;
        return types::structure(name);
      }
      if (in_const_ && lookup(name)) throw TypeError(e.span, "local `" + name + "` in a constant expression");
      throw TypeError(e.span, "cannot find value `" + name + "` in this scope");
    }
    if (path.size() == 2) {
      auto it = env_.enums.find(path[0]);
      if (it != env_.enums.end() && !it->second.builtin) {
        int v = it->second.index_of(path[1]);
        if (v < 0) throw TypeError(e.span, "no variant `" + path[1] + "` in enum `" + path[0] + "`");
        if (it->second.variants[static_cast<std::size_t>(v)].fields.shape != FieldShape::Unit)
          throw TypeError(e.span, "variant `" + path_str(path) + "` expects fields");
        e.target = ExprTarget::EnumVariant;
        e.variant = v;
        return types::enumeration(path[0]);
      }
    }
    throw TypeError(e.span, "cannot resolve path `" + path_str(path) + "`");
  }

  void check_args(Expr& e, const std::vector<TypePtr>& params, const std::string& what) {
    if (e.kids.size() != params.size())
      throw TypeError(e.span, what + " takes " + std::to_string(params.size()) + " arguments but " +
                                  std::to_string(e.kids.size()) + " were supplied");
    for (std::size_t k = 0; k < params.size(); ++k) expect_type(e.kids[k], params[k]);
  }

  TypePtr call(Expr& e, const TypePtr& exp) {
    const Path& path = e.path;
    if (path.size() == 1) {
      const std::string& name = path[0];
      if (auto it = env_.functions.find(name); it != env_.functions.end()) {
        if (in_const_) throw TypeError(e.span, "function calls are not allowed in constant expressions");
        e.target = ExprTarget::Function;
        check_args(e, it->second.params, "function `" + name + "`");
        return it->second.result;
      }
      if (name == "Some") {
        if (e.kids.size() != 1) throw TypeError(e.span, "`Some` takes 1 argument");
        TypePtr hint = exp && exp->kind == Type::Kind::Enum && exp->name == "Option" ? exp->args[0] : nullptr;
        TypePtr inner = hint ? expect_type(e.kids[0], hint) : expr(e.kids[0], nullptr);
        e.target = ExprTarget::EnumVariant;
        e.variant = 0;
        return types::option(hint ? hint : inner);
      }
      if (name == "Ok" || name == "Err") {
        if (e.kids.size() != 1) throw TypeError(e.span, "`" + name + "` takes 1 argument");
        if (!exp || exp->kind != Type::Kind::Enum || exp->name != "Result")
          throw TypeError(e.span, "cannot infer the type of `" + name + "`; add a type annotation");
        expect_type(e.kids[0], exp->args[name == "Ok" ? 0 : 1]);
        e.target = ExprTarget::EnumVariant;
        e.variant = name == "Ok" ? 0 : 1;
        return exp;
      }
      if (auto it = env_.structs.find(name); it != env_.structs.end() && it->second.fields.shape == FieldShape::Tuple) {
        e.target = ExprTarget::Struct;
        check_args(e, it->second.fields.types, "struct `" + name + "`");
        return types::structure(name);
      }
      throw TypeError(e.span, "cannot find function `" + name + "`");
    }
    if (path.size() == 2) {
      auto it = env_.enums.find(path[0]);
      if (it != env_.enums.end() && !it->second.builtin) {
        int v = it->second.index_of(path[1]);
        if (v < 0) throw TypeError(e.span, "no variant `" + path[1] + "` in enum `" + path[0] + "`");
        const auto& fields = it->second.variants[static_cast<std::size_t>(v)].fields;
        if (fields.shape != FieldShape::Tuple) throw TypeError(e.span, "`" + path_str(path) + "` is not a tuple variant");
        check_args(e, fields.types, "variant `" + path_str(path) + "`");
        e.target = ExprTarget::EnumVariant;
        e.variant = v;
        return types::enumeration(path[0]);
      }
    }
    throw TypeError(e.span, "cannot resolve `" + path_str(path) + "`");
  }

  TypePtr struct_literal(Expr& e) {
    const FieldsInfo* fields = nullptr;
    TypePtr result;
    if (e.path.size() == 1 && env_.structs.count(e.path[0])) {
      fields = &env_.structs.at(e.path[0]).fields;
      result = types::structure(e.path[0]);
      e.target = ExprTarget::Struct;
    } else if (e.path.size() == 2 && env_.enums.count(e.path[0]) && !env_.enums.at(e.path[0]).builtin) {
      const auto& info = env_.enums.at(e.path[0]);
      int v = info.index_of(e.path[1]);
      if (v < 0) throw TypeError(e.span, "no variant `" + e.path[1] + "` in enum `" + e.path[0] + "`");
      fields = &info.variants[static_cast<std::size_t>(v)].fields;
      result = types::enumeration(e.path[0]);
      e.target = ExprTarget::EnumVariant;
      e.variant = v;
    } else {
      throw TypeError(e.span, "cannot find struct `" + path_str(e.path) + "`");
    }
    if (fields->shape != FieldShape::Named && !(fields->shape == FieldShape::Unit && e.kids.empty()))
      throw TypeError(e.span, "`" + path_str(e.path) + "` has no named fields");
    e.field_index.clear();
    std::set<int> seen;
    for (std::size_t k = 0; k < e.kids.size(); ++k) {
      int idx = fields->index_of(e.fields[k]);
      if (idx < 0) throw TypeError(e.kids[k].span, "no field `" + e.fields[k] + "` in `" + path_str(e.path) + "`");
      if (!seen.insert(idx).second) throw TypeError(e.kids[k].span, "field `" + e.fields[k] + "` specified twice");
      e.field_index.push_back(idx);
      expect_type(e.kids[k], fields->types[static_cast<std::size_t>(idx)]);
    }
    if (seen.size() != fields->types.size())
      throw TypeError(e.span, "missing fields in initializer of `" + path_str(e.path) + "`");
    return result;
  }

  TypePtr field(Expr& e) {
    TypePtr base = strip_refs(expr(e.kids[0], nullptr));
    bool numeric = !e.name.empty() && std::all_of(e.name.begin(), e.name.end(), [](char c) { return c >= '0' && c <= '9'; });
    if (base->kind == Type::Kind::Tuple && numeric) {
      std::size_t idx = std::stoul(e.name);
      if (idx >= base->args.size()) throw TypeError(e.span, "no field `" + e.name + "` on type " + quoted(base));
      e.field_index = {static_cast<int>(idx)};
      return base->args[idx];
    }
    if (base->kind == Type::Kind::Struct) {
      const auto& fields = env_.structs.at(base->name).fields;
      int idx = numeric && fields.shape == FieldShape::Tuple ? std::stoi(e.name) : fields.index_of(e.name);
      if (numeric && fields.shape != FieldShape::Tuple) idx = -1;
      if (idx < 0 || idx >= static_cast<int>(fields.types.size()))
        throw TypeError(e.span, "no field `" + e.name + "` on type " + quoted(base));
      e.field_index = {idx};
      return fields.types[static_cast<std::size_t>(idx)];
    }
    throw TypeError(e.span, "no field `" + e.name + "` on type " + quoted(base));
  }

  TypePtr binary(Expr& e, const TypePtr& exp) {
    BinaryOp op = e.binary_op;
    if (is_logical(op)) {
      expect_type(e.kids[0], types::boolean());
      expect_type(e.kids[1], types::boolean());
      return types::boolean();
    }
    // Type the operand that is not a bare literal first so that literals pick
    // up the other side's integer type.
    bool swap = is_int_literal(e.kids[0]) && !is_int_literal(e.kids[1]);
    Expr& first = swap ? e.kids[1] : e.kids[0];
    Expr& second = swap ? e.kids[0] : e.kids[1];
    TypePtr hint = !is_comparison(op) && exp && exp->kind == Type::Kind::Int ? exp : nullptr;
    TypePtr a = strip_refs(expr(first, hint));
    TypePtr b = strip_refs(expr(second, a));
    if (!coerces(b, a)) mismatch(second.span, a, b);
    if (is_comparison(op)) {
      bool ordered = op != BinaryOp::Eq && op != BinaryOp::Ne;
      if (ordered && a->kind != Type::Kind::Int && a->kind != Type::Kind::Char)
        throw TypeError(e.span, "operator `" + std::string(to_string(op)) + "` cannot compare values of type " + quoted(a));
      return types::boolean();
    }
    if (a->kind != Type::Kind::Int)
      throw TypeError(e.span, "operator `" + std::string(to_string(op)) + "` requires integers, found " + quoted(a));
    return a;
  }

  void check_place(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Path: {
        if (e.path.size() != 1) break;
        if (const Local* l = lookup(e.path[0])) {
          if (!l->is_mut) throw TypeError(e.span, "cannot assign to immutable variable `" + e.path[0] + "`");
          return;
        }
        if (auto it = env_.statics.find(e.path[0]); it != env_.statics.end()) {
          if (!it->second.is_mut) throw TypeError(e.span, "cannot assign to immutable static `" + e.path[0] + "`");
          return;
        }
        break;
      }
      case ExprKind::Field:
      case ExprKind::Index:
        // References are copies at run time, so writes must not go through one.
        if (e.kids[0].type && e.kids[0].type->kind == Type::Kind::Ref)
          throw TypeError(e.span, "assignment through a reference is not supported");
        check_place(e.kids[0]);
        return;
      case ExprKind::Deref: throw TypeError(e.span, "assignment through a reference is not supported");
      default: break;
    }
    throw TypeError(e.span, "invalid left-hand side of assignment");
  }

  TypePtr match(Expr& e, const TypePtr& expected) {
    TypePtr scrutinee = expr(e.kids[0], nullptr);
    TypePtr result = expected;
    TypePtr joined = types::never();
    for (auto& arm : e.arms) {
      scopes_.emplace_back();
      type_pattern_binding(arm.pattern, scrutinee);
      if (arm.guard) expect_type(*arm.guard, types::boolean());
      TypePtr body = expr(arm.body, result);
      scopes_.pop_back();
      joined = join(arm.body.span, joined, body);
      if (!result && joined->kind != Type::Kind::Never) result = joined;
    }
    ExhaustivenessResult ex = check_exhaustive(e, env_);
    if (!ex.exhaustive) throw NonExhaustiveError(e.span, ex.witness_text);
    return joined;
  }

  TypePtr block(Expr& e, const TypePtr& expected) {
    scopes_.emplace_back();
    bool diverges = false;
    for (auto& s : e.stmts) {
      if (s.kind == Stmt::Kind::Let) {
        let(s);
      } else {
        TypePtr t = expr(s.expr, s.has_semi ? nullptr : types::unit());
        if (t->kind == Type::Kind::Never) diverges = true;
        else if (!s.has_semi && !coerces(t, types::unit())) mismatch(s.expr.span, types::unit(), t);
      }
    }
    TypePtr out;
    if (e.has_tail) out = expr(e.kids[0], expected);
    else out = diverges ? types::never() : types::unit();
    scopes_.pop_back();
    return out;
  }

  void let(Stmt& s) {
    if (!s.init) throw TypeError(s.span, "`let` without an initializer is not supported");
    TypePtr annotated = s.type_annotation ? env_.resolve(*s.type_annotation) : nullptr;
    TypePtr init = annotated ? expect_type(*s.init, annotated) : expr(*s.init, nullptr);
    TypePtr t = annotated ? annotated : init;
    if (t->kind == Type::Kind::Never) t = types::unit();
    if (s.else_block) {
      TypePtr else_type = expr(*s.else_block, nullptr);
      if (else_type->kind != Type::Kind::Never)
        throw TypeError(s.else_block->span, "`else` block of `let ... else` must diverge");
    }
    type_pattern_binding(s.pattern, t);
    if (!s.else_block && !is_top(denotation(s.pattern, env_), t, env_)) {
      ExhaustivenessResult ex = check_exhaustive({&s.pattern}, {false}, t, env_);
      throw TypeError(s.pattern.span, "refutable pattern in local binding: `" + ex.witness_text +
                                          "` not covered; use `let ... else`");
    }
  }

  TypePtr question_mark(Expr& e) {
    if (in_const_ || !return_type_) throw TypeError(e.span, "`?` outside of a function body");
    TypePtr inner = strip_refs(expr(e.kids[0], nullptr));
    const TypePtr& ret = strip_refs(return_type_);
    if (inner->kind == Type::Kind::Enum && inner->name == "Option") {
      if (ret->kind != Type::Kind::Enum || ret->name != "Option")
        throw TypeError(e.span, "`?` on an `Option` requires the function to return an `Option`");
      return inner->args[0];
    }
    if (inner->kind == Type::Kind::Enum && inner->name == "Result") {
      if (ret->kind != Type::Kind::Enum || ret->name != "Result")
        throw TypeError(e.span, "`?` on a `Result` requires the function to return a `Result`");
      if (!coerces(inner->args[1], ret->args[1])) mismatch(e.span, ret->args[1], inner->args[1]);
      return inner->args[0];
    }
    throw TypeError(e.span, "the `?` operator can only be applied to `Option` or `Result`, found " + quoted(inner));
  }
};

// ---------------------------------------------------------------------------
// Constant evaluation
// ---------------------------------------------------------------------------

Value check_int(const Expr& e, std::int64_t v) {
  const TypePtr& t = strip_refs(e.type);
  if (v < t->int_min() || v > t->int_max())
    throw TypeError(e.span, "constant evaluation overflowed " + quoted(t));
  return Value::integer(v);
}

}  // namespace

TypedProgram check_program(Program program) {
  auto env = std::make_shared<TypeEnv>();
  Checker(*env).check(program);
  return TypedProgram{std::move(program), std::move(env)};
}

void type_pattern(Pattern& pattern, const TypePtr& scrutinee, const TypeEnv& env) {
  PatternTyper(env, nullptr).type(pattern, scrutinee);
}

Value evaluate_constant(const Expr& e, const TypeEnv& env) {
  auto all = [&](const std::vector<Expr>& kids) {
    std::vector<Value> out;
    for (const auto& k : kids) out.push_back(evaluate_constant(k, env));
    return out;
  };
  switch (e.kind) {
    case ExprKind::Literal:
      switch (e.literal.kind) {
        case Literal::Kind::Bool: return Value::boolean(e.literal.b);
        case Literal::Kind::Int: return Value::integer(e.literal.i);
        case Literal::Kind::Char: return Value::character(e.literal.c);
        case Literal::Kind::Str: return Value::string(e.literal.s);
      }
      break;
    case ExprKind::Path:
      switch (e.target) {
        case ExprTarget::Const: return env.consts.at(e.path[0]).value;
        case ExprTarget::EnumVariant: {
          const auto& info = env.enum_info(*strip_refs(e.type));
          return Value::enumeration(info.variants[static_cast<std::size_t>(e.variant)].name, e.variant, {});
        }
        case ExprTarget::Struct: return Value::structure(e.path[0], {});
        default: break;
      }
      break;
    case ExprKind::Call:
      if (e.target == ExprTarget::EnumVariant) {
        const auto& info = env.enum_info(*strip_refs(e.type));
        return Value::enumeration(info.variants[static_cast<std::size_t>(e.variant)].name, e.variant, all(e.kids));
      }
      if (e.target == ExprTarget::Struct) return Value::structure(e.path[0], all(e.kids));
      break;
    case ExprKind::StructLit: {
      std::vector<Value> fields(e.kids.size());
      for (std::size_t k = 0; k < e.kids.size(); ++k)
        fields[static_cast<std::size_t>(e.field_index[k])] = evaluate_constant(e.kids[k], env);
      if (e.target == ExprTarget::EnumVariant) {
        const auto& info = env.enum_info(*strip_refs(e.type));
        return Value::enumeration(info.variants[static_cast<std::size_t>(e.variant)].name, e.variant, std::move(fields));
      }
      return Value::structure(e.path[0], std::move(fields));
    }
    case ExprKind::Tuple: return e.kids.empty() ? Value::unit() : Value::tuple(all(e.kids));
    case ExprKind::Array: return Value::array(all(e.kids));
    case ExprKind::Ref:
    case ExprKind::Deref: return evaluate_constant(e.kids[0], env);
    case ExprKind::Block:
      if (e.stmts.empty() && e.has_tail) return evaluate_constant(e.kids[0], env);
      break;
    case ExprKind::Field: {
      Value base = evaluate_constant(e.kids[0], env);
      return base.elems.at(static_cast<std::size_t>(e.field_index[0]));
    }
    case ExprKind::Unary: {
      Value v = evaluate_constant(e.kids[0], env);
      if (e.unary_op == UnaryOp::Not) return Value::boolean(!v.b);
      return check_int(e, -v.i);
    }
    case ExprKind::Binary: {
      Value a = evaluate_constant(e.kids[0], env);
      if (e.binary_op == BinaryOp::And && !a.b) return Value::boolean(false);
      if (e.binary_op == BinaryOp::Or && a.b) return Value::boolean(true);
      Value b = evaluate_constant(e.kids[1], env);
      switch (e.binary_op) {
        case BinaryOp::And:
        case BinaryOp::Or: return Value::boolean(b.b);
        case BinaryOp::Eq: return Value::boolean(a == b);
        case BinaryOp::Ne: return Value::boolean(!(a == b));
        case BinaryOp::Lt: return Value::boolean(a < b);
        case BinaryOp::Le: return Value::boolean(!(b < a));
        case BinaryOp::Gt: return Value::boolean(b < a);
        case BinaryOp::Ge: return Value::boolean(!(a < b));
        case BinaryOp::Add: return check_int(e, a.i + b.i);
        case BinaryOp::Sub: return check_int(e, a.i - b.i);
        case BinaryOp::Mul: return check_int(e, a.i * b.i);
        case BinaryOp::Div:
        case BinaryOp::Rem:
          if (b.i == 0) throw TypeError(e.span, "division by zero in constant expression");
          return check_int(e, e.binary_op == BinaryOp::Div ? a.i / b.i : a.i % b.i);
      }
      break;
    }
    default: break;
  }
  throw TypeError(e.span, "expression is not a constant");
}

Value constant_from_source(const std::string& source, const TypePtr& expected, const TypeEnv& env) {
  Expr e = parse_expression(source);
  // The checker only reads the env when typing a constant expression.
  Checker checker(const_cast<TypeEnv&>(env));
  TypePtr t = checker.check_constant_expr(e, expected);
  if (!coerces(t, expected)) mismatch(e.span, expected, t);
  return evaluate_constant(e, env);
}

}  // namespace mcdc
