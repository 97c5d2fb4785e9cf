// Shared test helpers: file loading, the full analysis pipeline, a brute-force
// value enumerator and a random generator of well-typed patterns.
#pragma once

#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mcdc/coverage.hpp"
#include "mcdc/decisions.hpp"
#include "mcdc/parser.hpp"
#include "mcdc/refutability.hpp"
#include "mcdc/runtime.hpp"
#include "mcdc/types.hpp"
#include "mcdc/value_space.hpp"

namespace testing_support {

using namespace mcdc;

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string corpus_path(const std::string& name) { return std::string(MCDC_CORPUS_DIR) + "/" + name; }
inline std::string fixture_path(const std::string& name) { return std::string(MCDC_FIXTURE_DIR) + "/" + name; }

/// Parsed, checked, desugared program with its decisions.
struct Pipeline {
  std::string source;
  TypedProgram program;
  DecisionSet ds;
};

inline Pipeline build(const std::string& source, SliceRule rule = SliceRule::Verbatim,
                      const std::string& file = "<test>") {
  Pipeline p;
  p.source = source;
  p.program = desugar_question_mark(check_program(parse_program(source, file)));
  ExtractOptions options;
  options.slice_rule = rule;
  p.ds = extract_decisions(p.program, options);
  return p;
}

inline Pipeline build_file(const std::string& path, SliceRule rule = SliceRule::Verbatim) {
  return build(read_text(path), rule, path);
}

/// Corpus programs that come with a suite manifest.
inline const std::vector<std::string>& corpus_suites() {
  static const std::vector<std::string> names = {"enum_match", "complex_pattern", "first_value", "nested_if",
                                                 "match_in_if", "question_mark"};
  return names;
}

// ---- brute-force value enumeration -----------------------------------------

constexpr std::size_t kMaxSliceLength = 4;

inline std::vector<std::vector<Value>> cartesian(const std::vector<std::vector<Value>>& factors) {
  std::vector<std::vector<Value>> out{{}};
  for (const auto& f : factors) {
    std::vector<std::vector<Value>> next;
    for (const auto& prefix : out)
      for (const auto& v : f) {
        auto row = prefix;
        row.push_back(v);
        next.push_back(std::move(row));
      }
    out = std::move(next);
  }
  return out;
}

/// Every value of `t`; slices up to kMaxSliceLength elements.
inline std::vector<Value> enumerate_values(const TypePtr& t, const TypeEnv& env) {
  std::vector<Value> out;
  switch (t->kind) {
    case Type::Kind::Bool: return {Value::boolean(false), Value::boolean(true)};
    case Type::Kind::Int:
      for (std::int64_t i = t->int_min(); i <= t->int_max(); ++i) out.push_back(Value::integer(i));
      return out;
    case Type::Kind::Ref: return enumerate_values(t->args[0], env);
    case Type::Kind::Enum: {
      const EnumInfo& info = env.enum_info(*t);
      for (int k = 0; k < static_cast<int>(info.variants.size()); ++k) {
        std::vector<std::vector<Value>> factors;
        for (const auto& f : env.variant_fields(*t, k)) factors.push_back(enumerate_values(f, env));
        for (auto& row : cartesian(factors))
          out.push_back(Value::enumeration(info.variants[static_cast<std::size_t>(k)].name, k, std::move(row)));
      }
      return out;
    }
    case Type::Kind::Struct: {
      std::vector<std::vector<Value>> factors;
      for (const auto& f : env.struct_fields(*t)) factors.push_back(enumerate_values(f, env));
      for (auto& row : cartesian(factors)) out.push_back(Value::structure(t->name, std::move(row)));
      return out;
    }
    case Type::Kind::Tuple: {
      std::vector<std::vector<Value>> factors;
      for (const auto& f : t->args) factors.push_back(enumerate_values(f, env));
      for (auto& row : cartesian(factors)) out.push_back(Value::tuple(std::move(row)));
      return out;
    }
    case Type::Kind::Array: {
      std::vector<std::vector<Value>> factors(static_cast<std::size_t>(t->length), enumerate_values(t->args[0], env));
      for (auto& row : cartesian(factors)) out.push_back(Value::array(std::move(row)));
      return out;
    }
    case Type::Kind::Slice: {
      auto elems = enumerate_values(t->args[0], env);
      for (std::size_t len = 0; len <= kMaxSliceLength; ++len) {
        std::vector<std::vector<Value>> factors(len, elems);
        for (auto& row : cartesian(factors)) out.push_back(Value::array(std::move(row)));
      }
      return out;
    }
    default: throw std::logic_error("type is not enumerable: " + t->str());
  }
}

// ---- random well-typed patterns --------------------------------------------

/// Item declarations every generated pattern may refer to. The consts all have
/// types with more than one value.
inline const char* kGeneratorItems = R"(
enum Color { Red, Green, Blue }
enum Shape { Dot, Line(bool), Tagged(Color, bool) }
enum Solo { Only }
struct Point { x: bool, y: Color }
struct Pair(bool, Solo);
const LIMIT: u8 = 7;
const LOW: i8 = -2;
const FLAG: bool = true;
const FAV: Color = Color::Green;
)";

inline std::shared_ptr<const TypeEnv> generator_env() {
  static const std::shared_ptr<const TypeEnv> env = check_program(parse_program(kGeneratorItems, "<items>")).env;
  return env;
}

struct GeneratedPattern {
  std::string type_text;
  std::string pattern_text;
  TypePtr type;
  Pattern pattern;  // typed, not classified
  TypeEnv env;      // generator env widened for this pattern's slices
};

class PatternGenerator {
 public:
  explicit PatternGenerator(std::uint32_t seed) : rng_(seed) {}

  /// A pattern over a random enumerable type (at most 65536 values).
  GeneratedPattern next() {
    auto base = generator_env();
    for (;;) {
      std::string type_text = random_type(2);
      TypePtr type = base->resolve(parse_type(type_text));
      if (cardinality(type, *base) <= 65536.0) return for_type(type_text);
    }
  }

  /// A pattern over the given type.
  GeneratedPattern for_type(const std::string& type_text, int depth = 3) {
    auto base = generator_env();
    TypePtr type = base->resolve(parse_type(type_text));
    bindings_ = 0;
    std::string text = pattern(type, depth, false, true).text;
    try {
      GeneratedPattern g{type_text, text, type, parse_pattern(text), *base};
      g.env.note_pattern(g.pattern);
      type_pattern(g.pattern, type, g.env);
      return g;
    } catch (const Diagnostic& d) {
      throw std::runtime_error("generated `" + text + "` : " + type_text + " rejected: " + d.render());
    }
  }

 private:
  struct Piece {
    std::string text;
    bool needs_parens = false;  // ranges, `mut x` and or-patterns under `&` or `@`
  };

  std::mt19937 rng_;
  int bindings_ = 0;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool chance(int percent) { return pick(100) < percent; }

  std::string small_type() {
    static const char* kinds[] = {"bool", "Color", "Solo", "Option<bool>", "Pair"};
    return kinds[pick(5)];
  }

  std::string random_type(int depth) {
    static const char* leaves[] = {"bool", "u8", "i8", "Color", "Solo", "Option<bool>", "Option<Color>",
                                   "Shape", "Point", "Pair", "Option<u8>"};
    if (depth == 0 || chance(40)) return leaves[pick(11)];
    switch (pick(5)) {
      case 0: {
        int n = 2 + pick(2);
        std::string s = "(";
        for (int k = 0; k < n; ++k) s += (k ? ", " : "") + random_type(depth - 1);
        return s + ")";
      }
      case 1: return "[" + random_type(depth - 1) + "; " + std::to_string(1 + pick(3)) + "]";
      case 2: return "&[" + small_type() + "]";
      case 3: return "&" + random_type(depth - 1);
      default: return "Option<" + random_type(depth - 1) + ">";
    }
  }

  static double cardinality(const TypePtr& t, const TypeEnv& env) {
    switch (t->kind) {
      case Type::Kind::Bool: return 2;
      case Type::Kind::Int: return static_cast<double>(t->int_max() - t->int_min() + 1);
      case Type::Kind::Ref: return cardinality(t->args[0], env);
      case Type::Kind::Enum: {
        double n = 0;
        for (int k = 0; k < env.variant_count(*t); ++k) {
          double v = 1;
          for (const auto& f : env.variant_fields(*t, k)) v *= cardinality(f, env);
          n += v;
        }
        return n;
      }
      case Type::Kind::Struct: {
        double v = 1;
        for (const auto& f : env.struct_fields(*t)) v *= cardinality(f, env);
        return v;
      }
      case Type::Kind::Tuple: {
        double v = 1;
        for (const auto& f : t->args) v *= cardinality(f, env);
        return v;
      }
      case Type::Kind::Array: {
        double v = 1;
        for (std::int64_t k = 0; k < t->length; ++k) v *= cardinality(t->args[0], env);
        return v;
      }
      case Type::Kind::Slice: {
        double e = cardinality(t->args[0], env), v = 0, p = 1;
        for (std::size_t len = 0; len <= kMaxSliceLength; ++len, p *= e) v += p;
        return v;
      }
      default: return 1e18;
    }
  }

  std::string binding() { return "b" + std::to_string(bindings_++); }

  static std::string wrap(const Piece& p) { return p.needs_parens ? "(" + p.text + ")" : p.text; }

  Piece pattern(const TypePtr& t, int depth, bool in_or, bool top) {
    int roll = pick(100);
    if (roll < 8) return {"_"};
    if (roll < 14 && !in_or) {
      int style = pick(3);
      if (style == 0) return {"ref " + binding()};
      if (style == 1) return {"mut " + binding(), true};
      return {binding()};
    }
    if (roll < 20 && !in_or && depth > 0) return {binding() + " @ " + wrap(pattern(t, depth - 1, in_or, false)), true};
    if (roll < 30 && depth > 0) {
      int n = 2 + pick(2);
      std::string s;
      for (int k = 0; k < n; ++k) s += (k ? " | " : "") + wrap(pattern(t, depth - 1, true, false));
      return top ? Piece{s} : Piece{"(" + s + ")"};
    }
    if (roll < 34 && depth > 0) return {"(" + pattern(t, depth - 1, in_or, false).text + ")"};
    return shaped(t, depth, in_or);
  }

  std::string sub(const TypePtr& t, int depth, bool in_or) { return pattern(t, std::max(depth - 1, 0), in_or, false).text; }

  std::string int_literal(const Type& t) {
    std::int64_t lo = t.int_min(), hi = t.int_max();
    static const std::int64_t near[] = {0, 1, 2, 7, 8, -1, -2, -128, 127, 255, 100};
    std::int64_t v = chance(70) ? near[pick(11)] : lo + pick(static_cast<int>(hi - lo + 1));
    return std::to_string(std::clamp(v, lo, hi));
  }

  Piece shaped(const TypePtr& t, int depth, bool in_or) {
    switch (t->kind) {
      case Type::Kind::Bool: {
        static const char* opts[] = {"true", "false", "FLAG"};
        return {opts[pick(3)]};
      }
      case Type::Kind::Int: return int_pattern(*t);
      case Type::Kind::Ref: {
        Piece inner = pattern(t->args[0], std::max(depth - 1, 0), in_or, false);
        if (chance(30)) return inner;  // elided reference
        return {"&" + wrap(inner)};
      }
      case Type::Kind::Enum: return enum_pattern(t, depth, in_or);
      case Type::Kind::Struct: return struct_pattern(t, depth, in_or);
      case Type::Kind::Tuple: return tuple_pattern(t->args, depth, in_or, "(", ")");
      case Type::Kind::Array: {
        std::vector<TypePtr> elems(static_cast<std::size_t>(t->length), t->args[0]);
        return slice_pattern(elems, t->args[0], depth, in_or, false);
      }
      case Type::Kind::Slice: {
        std::vector<TypePtr> elems(static_cast<std::size_t>(pick(4)), t->args[0]);
        return slice_pattern(elems, t->args[0], depth, in_or, true);
      }
      default: return {"_"};
    }
  }

  Piece int_pattern(const Type& t) {
    std::int64_t lo = t.int_min(), hi = t.int_max();
    int roll = pick(10);
    if (roll < 3) return {int_literal(t), int_literal(t)[0] == '-'};
    if (roll == 3) return {t.is_signed ? "LOW" : "LIMIT"};
    if (roll == 4) return {std::to_string(lo) + "..=" + std::to_string(hi), true};
    std::int64_t a = std::stoll(int_literal(t)), b = std::stoll(int_literal(t));
    if (a > b) std::swap(a, b);
    switch (roll) {
      case 5: return {std::to_string(a) + "..=" + std::to_string(b), true};
      case 6:
        if (a == b) return {std::to_string(a)};
        return {std::to_string(a) + ".." + std::to_string(b), true};
      case 7: return {std::to_string(a) + "..", true};
      case 8: return {"..=" + std::to_string(b), true};
      default:
        if (b == lo) return {"..=" + std::to_string(b), true};
        return {".." + std::to_string(b), true};
    }
  }

  Piece enum_pattern(const TypePtr& t, int depth, bool in_or) {
    const EnumInfo& info = generator_env()->enum_info(*t);
    if (t->name == "Color" && chance(10)) return {"FAV"};
    int k = pick(static_cast<int>(info.variants.size()));
    const VariantInfo& v = info.variants[static_cast<std::size_t>(k)];
    std::string path = info.builtin ? v.name : info.name + "::" + v.name;
    auto fields = generator_env()->variant_fields(*t, k);
    if (fields.empty()) return {path};
    if (chance(10)) return {path + "(..)"};
    std::string s = path + "(";
    for (std::size_t i = 0; i < fields.size(); ++i) s += (i ? ", " : "") + sub(fields[i], depth, in_or);
    return {s + ")"};
  }

  Piece struct_pattern(const TypePtr& t, int depth, bool in_or) {
    const StructInfo& info = generator_env()->struct_info(*t);
    auto fields = generator_env()->struct_fields(*t);
    if (info.fields.shape == FieldShape::Tuple) return tuple_pattern(fields, depth, in_or, info.name + "(", ")");
    std::string s = info.name + " { ";
    bool any = false, skipped = false;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (chance(30)) {
        skipped = true;
        continue;
      }
      s += (any ? ", " : "") + info.fields.names[i] + ": " + sub(fields[i], depth, in_or);
      any = true;
    }
    if (!any) return {info.name + " { .. }"};
    if (skipped || chance(30)) s += ", ..";
    return {s + " }"};
  }

  Piece tuple_pattern(const std::vector<TypePtr>& elems, int depth, bool in_or, const std::string& open,
                      const std::string& close) {
    std::vector<std::string> parts;
    int rest = chance(25) ? pick(static_cast<int>(elems.size()) + 1) : -1;
    int skip = rest >= 0 ? pick(static_cast<int>(elems.size()) + 1 - rest) : 0;
    for (int k = 0; k < static_cast<int>(elems.size());) {
      if (k == rest) {
        parts.push_back("..");
        k += skip;
        rest = -1;
        continue;
      }
      parts.push_back(sub(elems[static_cast<std::size_t>(k)], depth, in_or));
      ++k;
    }
    if (rest >= 0) parts.push_back("..");
    std::string s = open;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i];
    if (open == "(" && parts.size() == 1 && parts[0] != "..") s += ",";
    return {s + close};
  }

  Piece slice_pattern(const std::vector<TypePtr>& fixed, const TypePtr& elem, int depth, bool in_or, bool dynamic) {
    std::vector<std::string> parts;
    for (const auto& e : fixed) parts.push_back(sub(e, depth, in_or));
    bool rest = dynamic ? chance(55) : chance(20);
    if (!dynamic && rest && !parts.empty()) parts.erase(parts.begin() + pick(static_cast<int>(parts.size())));
    if (rest) {
      std::string r = (!in_or && chance(30)) ? binding() + " @ .." : "..";
      parts.insert(parts.begin() + pick(static_cast<int>(parts.size()) + 1), r);
    }
    (void)elem;
    std::string s = "[";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i];
    return {s + "]"};
  }
};

// ---- synthetic boolean decisions ------------------------------------------

/// Random And/Or/Not tree over conditions lo..hi.
inline BoolExpr random_structure(std::mt19937& rng, int lo, int hi) {
  if (lo == hi) return BoolExpr::leaf(lo);
  int split = std::uniform_int_distribution<int>(lo, hi - 1)(rng);
  BoolExpr node;
  node.kind = rng() % 2 ? BoolExpr::Kind::And : BoolExpr::Kind::Or;
  node.kids = {random_structure(rng, lo, split), random_structure(rng, split + 1, hi)};
  if (rng() % 8 == 0) return BoolExpr{BoolExpr::Kind::Not, -1, {node}, false};
  return node;
}

// Independent short-circuit evaluator used to produce observed vectors.
inline bool oracle_eval(const BoolExpr& s, const std::vector<bool>& values, std::vector<TriState>& seen) {
  switch (s.kind) {
    case BoolExpr::Kind::Cond:
      if (seen.size() < values.size()) seen.resize(values.size());
      seen[static_cast<std::size_t>(s.cond)] = values[static_cast<std::size_t>(s.cond)];
      return values[static_cast<std::size_t>(s.cond)];
    case BoolExpr::Kind::Not: return !oracle_eval(s.kids[0], values, seen);
    case BoolExpr::Kind::And:
      for (const auto& k : s.kids)
        if (!oracle_eval(k, values, seen)) return false;
      return true;
    case BoolExpr::Kind::Or:
      for (const auto& k : s.kids)
        if (oracle_eval(k, values, seen)) return true;
      return false;
    case BoolExpr::Kind::True: return true;
  }
  return false;
}

// Literal all-pairs rule over the observed vectors.
inline std::vector<bool> oracle_independent(const std::vector<EvaluationVector>& vs, std::size_t n) {
  std::vector<bool> ok(n, false);
  for (std::size_t c = 0; c < n; ++c)
    for (const auto& a : vs)
      for (const auto& b : vs) {
        if (!a.conds[c] || !b.conds[c] || *a.conds[c] == *b.conds[c] || a.outcome == b.outcome) continue;
        bool others = true;
        for (std::size_t k = 0; k < n; ++k)
          if (k != c && a.conds[k] && b.conds[k] && *a.conds[k] != *b.conds[k]) others = false;
        if (others) ok[c] = true;
      }
  return ok;
}

inline DecisionSet single_decision(const BoolExpr& s, std::size_t n) {
  DecisionSet ds;
  Decision d;
  d.id = 0;
  d.structure = s;
  for (std::size_t k = 0; k < n; ++k) {
    Condition c;
    c.id = static_cast<int>(k);
    c.index = static_cast<int>(k);
    c.kind = ConditionKind::BooleanLeaf;
    c.text = "c" + std::to_string(k);
    d.conditions.push_back(c);
  }
  ds.decisions.push_back(d);
  return ds;
}

inline Trace trace_of(const std::vector<EvaluationVector>& vs) {
  Trace t;
  t.vectors = vs;
  t.canonicalize();
  return t;
}

inline EvaluationVector vec(const std::string& pattern, bool outcome) {
  EvaluationVector v;
  v.decision = 0;
  v.outcome = outcome;
  for (char ch : pattern) v.conds.push_back(ch == '-' ? TriState{} : TriState{ch == 'T'});
  return v;
}

/// Every node of a pattern tree, pre-order.
inline void for_each_node(const Pattern& p, const std::function<void(const Pattern&)>& f) {
  f(p);
  for (const auto& c : p.children) for_each_node(c, f);
}

}  // namespace testing_support
