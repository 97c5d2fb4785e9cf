#include "doctest.h"
#include "support.hpp"

using namespace mcdc;
using namespace testing_support;

namespace {

const char* kItems = R"(
enum Person { Crew, Passenger(u16) }
enum Color { Red, Green, Blue }
struct Point { x: bool, y: Color }
const LIMIT: u8 = 7;
)";

std::shared_ptr<const TypeEnv> items_env() {
  static const auto env = check_program(parse_program(kItems)).env;
  return env;
}

TypePtr type_of(const std::string& text, const TypeEnv& env) { return env.resolve(parse_type(text)); }

Pattern typed(const std::string& pattern, const TypePtr& t, TypeEnv& env) {
  Pattern p = parse_pattern(pattern);
  env.note_pattern(p);
  type_pattern(p, t, env);
  return p;
}

std::string witness_of(const std::string& source) {
  try {
    check_program(parse_program(source));
  } catch (const NonExhaustiveError& e) {
    return e.witness();
  }
  return "<exhaustive>";
}

std::string type_error_of(const std::string& source) {
  try {
    check_program(parse_program(source));
  } catch (const NonExhaustiveError&) {
    return "<non-exhaustive>";
  } catch (const TypeError& e) {
    return e.message();
  }
  return "<ok>";
}

}  // namespace

TEST_CASE("check_program builds the item table") {
  TypedProgram tp = check_program(parse_program(std::string(kItems) + "fn f(p: Person) -> u8 { LIMIT }"));
  const TypeEnv& env = *tp.env;
  REQUIRE(env.enums.count("Person"));
  CHECK(env.enums.at("Person").variants.size() == 2);
  CHECK(env.structs.at("Point").fields.names == std::vector<std::string>{"x", "y"});
  CHECK(env.consts.at("LIMIT").value == Value::integer(7));
  REQUIRE(env.functions.count("f"));
  CHECK(env.functions.at("f").result->str() == "u8");
  CHECK(env.enums.at("Option").builtin);
  CHECK(env.enums.at("Result").builtin);
}

TEST_CASE("empty program checks") { CHECK(check_program(parse_program("")).program.items.empty()); }

TEST_CASE("every expression and pattern gets a type") {
  TypedProgram tp = check_program(parse_program(read_text(corpus_path("complex_pattern.rps"))));
  std::size_t untyped = 0;
  std::function<void(const Pattern&)> pat = [&](const Pattern& p) {
    untyped += !p.type;
    for (const auto& c : p.children) pat(c);
  };
  std::function<void(const Expr&)> ex = [&](const Expr& e) {
    untyped += !e.type;
    for (const auto& k : e.kids) ex(k);
    for (const auto& s : e.stmts) {
      if (s.kind == Stmt::Kind::Let) {
        pat(s.pattern);
        if (s.init) ex(*s.init);
      } else {
        ex(s.expr);
      }
    }
    for (const auto& a : e.arms) pat(a.pattern), ex(a.body);
    for (const auto& p : e.pattern) pat(p);
  };
  for (const auto& item : tp.program.items)
    if (const auto* f = std::get_if<FnDef>(&item)) ex(f->body);
  CHECK(untyped == 0);
}

TEST_CASE("type errors") {
  CHECK(type_error_of("fn f(x: u8) -> bool { x }").find("mismatched types") == 0);
  CHECK(type_error_of("fn f(x: u8) -> u8 { y }").find("cannot find value `y`") == 0);
  CHECK(type_error_of("fn f(x: u8) -> u8 { match x { 300 => 1, _ => 0 } }").find("out of range") != std::string::npos);
  CHECK(type_error_of("enum E { A } fn f(e: E) -> u8 { match e { E::B => 1 } }").find("no variant `B`") !=
        std::string::npos);
  CHECK(type_error_of("fn f(x: (u8, u8)) -> u8 { let (a, a) = x; a }").find("bound more than once") !=
        std::string::npos);
  CHECK(type_error_of("fn f(x: u8) -> u8 { match x { 5..=1 => 0, _ => 1 } }").find("lower range bound") == 0);
  CHECK(type_error_of("fn f(x: u8) -> u8 { match x { ..0 => 0, _ => 1 } }").find("below the type minimum") !=
        std::string::npos);
  CHECK(type_error_of("fn f(x: Option<u8>) -> u8 { match x { Some(a) | None => 0 } }").find("all alternatives") !=
        std::string::npos);
  CHECK_THROWS_AS(check_program(parse_program("enum E { }")), ParseError);
  CHECK(type_error_of("struct S { a: S }").find("infinite size") != std::string::npos);
  CHECK(type_error_of("const A: u8 = B; const B: u8 = A;").find("cycle") != std::string::npos);
  CHECK(type_error_of("struct P { a: u8, b: u8 } fn f(p: P) -> u8 { let P { a } = p; a }").find("add `..`") !=
        std::string::npos);
}

TEST_CASE("value_space_of gives Top") {
  auto env = items_env();
  ValueSpace u8s = value_space_of(types::integer(8, false), *env);
  CHECK(u8s.kind() == ValueSpace::Kind::Int);
  CHECK(u8s.interval_set() == IntervalSet::single(0, 255));

  ValueSpace people = value_space_of(type_of("Person", *env), *env);
  CHECK(people.kind() == ValueSpace::Kind::Enum);
  CHECK(people.variants().size() == 2);
  CHECK(people.contains(Value::enumeration("Crew", 0, {})));
  CHECK(people.contains(Value::enumeration("Passenger", 1, {Value::integer(65535)})));

  TypePtr pair = types::tuple({types::boolean(), types::boolean()});
  ValueSpace pairs = value_space_of(pair, *env);
  CHECK(pairs.kind() == ValueSpace::Kind::Product);
  CHECK(is_top(pairs, pair, *env));
  for (bool a : {false, true})
    for (bool b : {false, true}) CHECK(pairs.contains(Value::tuple({Value::boolean(a), Value::boolean(b)})));
}

TEST_CASE("denotation examples") {
  TypeEnv env = *items_env();
  TypePtr u8 = types::integer(8, false);
  CHECK(denotation(typed("2..", u8, env), env).interval_set() == IntervalSet::single(2, 255));
  CHECK(denotation(typed("0 | 5..=9", u8, env), env).interval_set() ==
        IntervalSet({{0, 0}, {5, 9}}));
  CHECK(denotation(typed("LIMIT", u8, env), env).interval_set() == IntervalSet::single(7, 7));

  TypePtr person = type_of("Person", env);
  ValueSpace p3 = denotation(typed("Person::Passenger(3)", person, env), env);
  CHECK(p3.contains(Value::enumeration("Passenger", 1, {Value::integer(3)})));
  CHECK_FALSE(p3.contains(Value::enumeration("Passenger", 1, {Value::integer(4)})));
  CHECK_FALSE(p3.contains(Value::enumeration("Crew", 0, {})));

  for (const char* top : {"_", "x", "Person::Crew | Person::Passenger(_)", "whole @ _"})
    CHECK(is_top(denotation(typed(top, person, env), env), person, env));
  CHECK_FALSE(is_top(p3, person, env));
}

TEST_CASE("space_subtract examples") {
  TypeEnv env = *items_env();
  TypePtr u8 = types::integer(8, false);
  ValueSpace top = value_space_of(u8, env);
  ValueSpace rest = space_subtract(top, denotation(typed("0 | 2..", u8, env), env));
  CHECK(rest.interval_set() == IntervalSet::single(1, 1));
  CHECK(space_subtract(top, top).is_empty());

  TypePtr person = type_of("Person", env);
  ValueSpace left = space_subtract(value_space_of(person, env), denotation(typed("Person::Crew", person, env), env));
  CHECK(left.variants().size() == 1);
  CHECK(left.variants().count(1));

  TypePtr color = type_of("Color", env);
  CHECK_THROWS_AS(space_subtract(value_space_of(color, env), top), SubtractionUnsupported);
}

TEST_CASE("string spaces subtract through their complement") {
  TypeEnv env = *items_env();
  TypePtr s = types::ref(types::str());
  ValueSpace top = value_space_of(s, env);
  CHECK(top.kind() == ValueSpace::Kind::Str);
  CHECK(top.str_set().cofinite);
  ValueSpace hello = denotation(typed("\"hello\"", s, env), env);
  ValueSpace others = space_subtract(top, hello);
  CHECK_FALSE(others.contains(Value::string("hello")));
  CHECK(others.contains(Value::string("")));
  CHECK(space_subtract(others, top).is_empty());
  CHECK(others.witness(s, env) == Value::string(""));
}

TEST_CASE("space_subtract agrees with enumeration on generated pattern pairs") {
  PatternGenerator gen(404);
  auto base = generator_env();
  std::size_t compared = 0;
  for (const char* type_text : {"(bool, Color)", "Option<u8>", "Shape", "[Option<bool>; 2]", "&[Color]", "Point",
                                "(i8, Solo)", "Option<Option<Color>>"}) {
    for (int k = 0; k < 25; ++k) {
      GeneratedPattern a = gen.for_type(type_text), b = gen.for_type(type_text);
      TypeEnv env = a.env;
      env.note_pattern(b.pattern);
      ValueSpace da = denotation(a.pattern, env), db = denotation(b.pattern, env);
      ValueSpace diff = space_subtract(da, db);
      ValueSpace both = da.intersect(db), any = da.unite(db);
      for (const auto& v : enumerate_values(a.type, env)) {
        bool ma = matches(a.pattern, v, env), mb = matches(b.pattern, v, env);
        CAPTURE(a.pattern_text);
        CAPTURE(b.pattern_text);
        CHECK(diff.contains(v) == (ma && !mb));
        CHECK(both.contains(v) == (ma && mb));
        CHECK(any.contains(v) == (ma || mb));
        ++compared;
      }
    }
  }
  CHECK(compared > 10000);
}

TEST_CASE("check_exhaustive examples") {
  CHECK(witness_of(read_text(corpus_path("non_exhaustive.rps"))) == "1");
  CHECK(witness_of("fn f(x: Option<bool>) -> u8 { match x { Some(true) => 1, None => 0 } }") == "Some(false)");
  CHECK(witness_of("fn f(x: (bool, bool)) -> u8 { match x { (true, _) => 1, (_, true) => 2 } }") ==
        "(false, false)");
  CHECK(witness_of("fn f(x: &[u8]) -> u8 { match x { [] => 0, [_] => 1 } }") == "[0, 0]");
  CHECK(witness_of("fn f(x: u8) -> u8 { match x { y if y > 3 => 1, 0..=3 => 0 } }") == "4");
  CHECK(witness_of("fn f(x: u8) -> u8 { match x { 0..=100 => 0, 101.. => 1 } }") == "<exhaustive>");
  CHECK(witness_of("fn f(x: i8) -> u8 { match x { ..0 => 0, 1.. => 1 } }") == "0");
  CHECK(witness_of("fn f(x: &[bool]) -> u8 { match x { [] => 0, [.., true] => 1, [false, ..] => 2 } }") ==
        "[true, false]");
  CHECK(witness_of(read_text(corpus_path("enum_match.rps"))) == "<exhaustive>");
}

TEST_CASE("check_exhaustive agrees with enumeration") {
  PatternGenerator gen(77);
  std::size_t exhaustive = 0, partial = 0;
  for (const char* type_text : {"(bool, bool)", "Option<Color>", "Shape", "&[bool]", "[Color; 2]", "Option<u8>",
                                "Pair", "(Option<bool>, Solo)"}) {
    for (int k = 0; k < 30; ++k) {
      std::vector<GeneratedPattern> arms;
      int n = 1 + k % 4;
      for (int a = 0; a < n; ++a) arms.push_back(gen.for_type(type_text));
      TypeEnv env = arms[0].env;
      for (const auto& a : arms) env.note_pattern(a.pattern);
      std::vector<const Pattern*> ptrs;
      for (const auto& a : arms) ptrs.push_back(&a.pattern);
      auto result = check_exhaustive(ptrs, std::vector<bool>(ptrs.size(), false), arms[0].type, env);
      auto covered = [&](const Value& v) {
        return std::any_of(ptrs.begin(), ptrs.end(), [&](const Pattern* p) { return matches(*p, v, env); });
      };
      bool oracle_all = true;
      for (const auto& v : enumerate_values(arms[0].type, env)) oracle_all = oracle_all && covered(v);
      std::string shown;
      for (const auto& a : arms) shown += a.pattern_text + " ; ";
      CAPTURE(shown);
      if (!oracle_all) CHECK_FALSE(result.exhaustive);
      if (result.exhaustive) {
        CHECK(oracle_all);
        ++exhaustive;
      } else {
        REQUIRE(result.witness);
        CHECK_FALSE(covered(*result.witness));
        ++partial;
      }
    }
  }
  CHECK(exhaustive > 10);
  CHECK(partial > 10);
}

TEST_CASE("guarded arms do not count towards exhaustiveness") {
  TypeEnv env = *items_env();
  Pattern all = typed("_", types::boolean(), env);
  auto guarded = check_exhaustive({&all}, {true}, types::boolean(), env);
  CHECK_FALSE(guarded.exhaustive);
  CHECK(guarded.witness_text == "false");
  CHECK(check_exhaustive({&all}, {false}, types::boolean(), env).exhaustive);
}

TEST_CASE("witness rendering uses paths") {
  TypeEnv env = *items_env();
  TypePtr person = type_of("Person", env);
  CHECK(env.format_value(Value::enumeration("Passenger", 1, {Value::integer(3)}), person) ==
        "Person::Passenger(3)");
  CHECK(env.format_value(Value::enumeration("Some", 0, {Value::integer(0)}), types::option(types::integer(8, false))) ==
        "Some(0)");
}

TEST_CASE("constant_from_source converts suite arguments") {
  TypeEnv env = *items_env();
  CHECK(constant_from_source("Person::Passenger(3)", type_of("Person", env), env) ==
        Value::enumeration("Passenger", 1, {Value::integer(3)}));
  CHECK(constant_from_source("&[1, 2]", type_of("&[u8]", env), env) ==
        Value::array({Value::integer(1), Value::integer(2)}));
  CHECK_THROWS_AS(constant_from_source("300", types::integer(8, false), env), TypeError);
  CHECK_THROWS_AS(constant_from_source("true", types::integer(8, false), env), TypeError);
}
