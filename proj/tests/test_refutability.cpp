#include "doctest.h"
#include "support.hpp"

using namespace mcdc;
using namespace testing_support;

namespace {

constexpr auto DR = Refutability::DirectlyRefutable;
constexpr auto IR = Refutability::IndirectlyRefutable;
constexpr auto Irr = Refutability::Irrefutable;

const char* kItems = R"(
enum AB { A, B }
enum Solo { Only }
struct Wrap { inner: AB }
const ONLY: Solo = Solo::Only;
const ZERO: u8 = 0;
)";

struct Classified {
  Pattern pattern;
  TypeEnv env;
};

Classified classified(const std::string& pattern, const std::string& type, SliceRule rule = SliceRule::Verbatim) {
  static const auto base = check_program(parse_program(kItems)).env;
  Classified c{parse_pattern(pattern), *base};
  c.env.note_pattern(c.pattern);
  type_pattern(c.pattern, c.env.resolve(parse_type(type)), c.env);
  classify(c.pattern, c.env, rule);
  return c;
}

Refutability root(const std::string& pattern, const std::string& type, SliceRule rule = SliceRule::Verbatim) {
  return *classified(pattern, type, rule).pattern.refutability;
}

bool rest_like(const Pattern& p) {
  return p.kind == PatternKind::Rest || (p.kind == PatternKind::Identifier && !p.children.empty() && rest_like(p.children[0]));
}

// Replaces the node at pre-order position `target` with `_`. Rest positions
// are left alone: `_` there would change the arity.
bool wildcard_at(Pattern& p, int& position, int target) {
  if (position++ == target) {
    if (rest_like(p)) return true;
    Pattern w;
    w.kind = PatternKind::Wildcard;
    w.span = p.span;
    w.id = p.id;
    w.type = p.type;
    p = w;
    return true;
  }
  for (auto& c : p.children)
    if (wildcard_at(c, position, target)) return true;
  return false;
}

std::size_t node_count(const Pattern& p) {
  std::size_t n = 0;
  for_each_node(p, [&](const Pattern&) { ++n; });
  return n;
}

// Pairs of pre-order nodes from the same pattern classified two ways.
void for_each_pair(const Pattern& a, const Pattern& b, const std::function<void(const Pattern&, const Pattern&)>& f) {
  f(a, b);
  for (std::size_t k = 0; k < a.children.size(); ++k) for_each_pair(a.children[k], b.children[k], f);
}

}  // namespace

TEST_CASE("per-kind examples") {
  CHECK(root("_", "AB") == Irr);
  CHECK(root("_", "&[u8]") == Irr);
  CHECK(root("1", "i32") == DR);
  CHECK(root("0..=255", "u8") == Irr);
  CHECK(root("0..=255", "i32") == DR);
  CHECK(root("x", "u8") == Irr);
  CHECK(root("ref mut x", "u8") == Irr);

  Classified some0 = classified("Some(0)", "Option<i32>");
  CHECK(*some0.pattern.refutability == DR);
  CHECK(*some0.pattern.children[0].refutability == DR);

  Classified tuple = classified("(a, 1)", "(i32, i32)");
  CHECK(*tuple.pattern.refutability == IR);
  CHECK(*tuple.pattern.children[0].refutability == Irr);
  CHECK(*tuple.pattern.children[1].refutability == DR);

  CHECK(root("AB::A | AB::B", "AB") == Irr);
  CHECK(root("AB::A", "AB") == DR);
  CHECK(root("Solo::Only", "Solo") == Irr);
  CHECK(root("Wrap { inner: AB::A }", "Wrap") == IR);
  CHECK(root("Wrap { .. }", "Wrap") == Irr);
  CHECK(root("&(0..=5)", "&u8") == IR);
  CHECK(root("&_", "&u8") == Irr);
  CHECK(root("(1)", "u8") == IR);
  CHECK(root("(_)", "u8") == Irr);
  CHECK(root("x @ 1", "u8") == IR);
  CHECK(root("[1, _]", "[u8; 2]") == IR);
  CHECK(root("[_, ..]", "[u8; 2]") == Irr);
}

TEST_CASE("whole-pattern refutability") {
  CHECK(is_refutable(classified("[Some(var), Some(2..=8), rest @ ..]", "&[Option<u8>]").pattern));
  CHECK_FALSE(is_refutable(classified("(x, _)", "(u8, bool)").pattern));
  Classified ref = classified("&Some(_)", "&Option<u8>");
  CHECK(is_refutable(ref.pattern));
  CHECK(*ref.pattern.refutability == IR);
  CHECK(*ref.pattern.children[0].refutability == DR);
}

TEST_CASE("a nested slice pattern decomposes into the expected tree") {
  Classified c = classified("[Some(var), Some(2..=8), rest @ ..]", "&[Option<u8>]");
  std::string tree = pattern_tree_text(c.pattern);
  CHECK(tree.find("[_, _, _]") != std::string::npos);
  CHECK(tree.find("Some(_)") != std::string::npos);
  CHECK(tree.find("2..=8") != std::string::npos);
  CHECK(tree.find("rest @ _") != std::string::npos);
  CHECK(node_label(c.pattern) == "[_, _, _]");
  CHECK(node_label(c.pattern.children[2]) == "rest @ _");
  CHECK(*c.pattern.children[0].children[0].refutability == Irr);
  CHECK(*c.pattern.children[1].children[0].refutability == DR);
  CHECK(*c.pattern.children[2].refutability == Irr);
}

TEST_CASE("dynamic slice anomaly: `[..]` under both rules") {
  CHECK(root("[..]", "&[u8]", SliceRule::Verbatim) == DR);
  CHECK(root("[..]", "&[u8]", SliceRule::Corrected) == Irr);
  CHECK(root("[rest @ ..]", "&[u8]", SliceRule::Corrected) == Irr);
  CHECK(root("[x, ..]", "&[u8]", SliceRule::Corrected) == DR);
  CHECK(root("[]", "&[u8]", SliceRule::Corrected) == DR);
  CHECK(root("[1..=2, ..]", "&[u8]", SliceRule::Verbatim) == IR);
  // The runtime disagrees with the verbatim rule: `[..]` matches everything.
  Classified c = classified("[..]", "&[bool]", SliceRule::Verbatim);
  for (const auto& v : enumerate_values(c.pattern.type, c.env)) CHECK(matches(c.pattern, v, c.env));
}

TEST_CASE("path to a single-valued const is directly refutable") {
  Classified only = classified("ONLY", "Solo");
  CHECK(*only.pattern.refutability == DR);
  CHECK(is_top(denotation(only.pattern, only.env), only.pattern.type, only.env));
  CHECK(root("ZERO", "u8") == DR);
}

TEST_CASE("grouping is indirectly refutable over a refutable inner pattern") {
  Classified g = classified("((AB::A))", "AB");
  CHECK(*g.pattern.refutability == IR);
  CHECK(*g.pattern.children[0].refutability == IR);
  CHECK(*g.pattern.children[0].children[0].refutability == DR);
}

TEST_CASE("or-patterns: a total union is irrefutable, alternatives keep their class") {
  Classified c = classified("Some(true) | Some(false) | None", "Option<bool>");
  CHECK(*c.pattern.refutability == Irr);
  CHECK(*c.pattern.children[0].refutability == DR);
  CHECK(*c.pattern.children[2].refutability == DR);
  CHECK(root("Some(true) | None", "Option<bool>") == IR);
  CHECK(root("_ | 1", "u8") == Irr);
  CHECK(root("0..=100 | 101..", "u8") == Irr);
  CHECK(root("(true, _) | (false, _)", "(bool, u8)") == Irr);
}

TEST_CASE("string literals are always refutable") {
  CHECK(root("\"a\"", "&str") == DR);
  CHECK(root("\"a\" | _", "&str") == Irr);
}

TEST_CASE("refutability agrees with enumeration on other seeds (corrected rule)") {
  std::size_t refutable = 0, total = 0;
  for (std::uint32_t seed : {1u, 2u, 3u}) {
    PatternGenerator gen(seed);
    for (int k = 0; k < 200; ++k) {
      GeneratedPattern g = gen.next();
      Pattern p = g.pattern;
      classify(p, g.env, SliceRule::Corrected);
      bool all = true;
      for (const auto& v : enumerate_values(g.type, g.env)) all = all && matches(p, v, g.env);
      CAPTURE(g.pattern_text);
      CAPTURE(g.type_text);
      CHECK(is_refutable(p) == !all);
      refutable += !all;
      ++total;
    }
  }
  CHECK(refutable > 0);
  CHECK(refutable < total);
}

TEST_CASE("irrefutable nodes denote Top and refutable nodes do not") {
  PatternGenerator gen(29);
  for (int k = 0; k < 300; ++k) {
    GeneratedPattern g = gen.next();
    Pattern p = g.pattern;
    classify(p, g.env, SliceRule::Corrected);
    CAPTURE(g.pattern_text);
    for_each_node(p, [&](const Pattern& n) {
      bool top = is_top(denotation(n, g.env), n.type, g.env);
      bool const_path = n.kind == PatternKind::Path && n.meaning == PatternMeaning::Const;
      if (*n.refutability == Irr) CHECK(top);
      if (*n.refutability != Irr && !const_path) CHECK_FALSE(top);
    });
  }
}

TEST_CASE("replacing a child with `_` never makes a node refutable") {
  PatternGenerator gen(31);
  for (int k = 0; k < 150; ++k) {
    GeneratedPattern g = gen.next();
    Pattern original = g.pattern;
    classify(original, g.env, SliceRule::Corrected);
    std::size_t n = node_count(original);
    for (std::size_t target = 1; target < n; ++target) {
      Pattern changed = g.pattern;
      int pos = 0;
      wildcard_at(changed, pos, static_cast<int>(target));
      classify(changed, g.env, SliceRule::Corrected);
      CAPTURE(g.pattern_text);
      CAPTURE(target);
      if (!is_refutable(original)) CHECK_FALSE(is_refutable(changed));
    }
  }
}

TEST_CASE("node invariants") {
  PatternGenerator gen(37);
  for (int k = 0; k < 300; ++k) {
    GeneratedPattern g = gen.next();
    Pattern p = g.pattern;
    classify(p, g.env, SliceRule::Corrected);
    CAPTURE(g.pattern_text);
    for_each_node(p, [&](const Pattern& n) {
      REQUIRE(n.refutability);
      if (n.kind == PatternKind::Or) return;
      bool refutable_child = std::any_of(n.children.begin(), n.children.end(),
                                         [](const Pattern& c) { return *c.refutability != Irr; });
      if (*n.refutability == Irr) CHECK_FALSE(refutable_child);
      if (*n.refutability == IR) CHECK(refutable_child);
    });
  }
}

TEST_CASE("classification is deterministic and rule-independent outside dynamic slices") {
  PatternGenerator gen(41);
  for (int k = 0; k < 300; ++k) {
    GeneratedPattern g = gen.next();
    Pattern a = g.pattern, b = g.pattern, c = g.pattern;
    classify(a, g.env, SliceRule::Verbatim);
    classify(b, g.env, SliceRule::Verbatim);
    classify(c, g.env, SliceRule::Corrected);
    CHECK(pattern_tree_text(a) == pattern_tree_text(b));
    bool has_dynamic_slice = false;
    for_each_node(a, [&](const Pattern& n) {
      has_dynamic_slice |= n.kind == PatternKind::Slice && strip_refs(n.type)->kind == Type::Kind::Slice;
    });
    if (!has_dynamic_slice) CHECK(pattern_tree_text(a) == pattern_tree_text(c));
    for_each_pair(a, c, [&](const Pattern& x, const Pattern& y) {
      if (x.kind == PatternKind::Literal || x.kind == PatternKind::Wildcard) CHECK(x.refutability == y.refutability);
    });
  }
}
