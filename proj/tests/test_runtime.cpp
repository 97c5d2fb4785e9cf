#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace mcdc;
using namespace testing_support;

namespace {

std::vector<std::string> patterns_of(const Trace& t, int decision) {
  std::vector<std::string> out;
  for (const auto& v : t.vectors)
    if (v.decision == decision) out.push_back(v.pattern() + (v.outcome ? " T" : " F"));
  return out;
}

std::string runtime_error_of(const std::string& source, const std::string& entry, std::vector<Value> args,
                             RunOptions options = {}) {
  Pipeline p = build(source);
  EvalResult r = evaluate(p.program, p.ds, entry, args, options);
  return r.error ? r.error->message() : "<none>";
}

std::vector<TestCase> suite_of(const Pipeline& p, const std::string& file) {
  return load_suite(read_text(file), p.program);
}

}  // namespace

TEST_CASE("enum match with Passenger(3)") {
  Pipeline p = build_file(corpus_path("enum_match.rps"));
  Value passenger = constant_from_source("Person::Passenger(3)", p.program.env->resolve(parse_type("Person")), *p.program.env);
  EvalResult r = evaluate(p.program, p.ds, "describe", {passenger});
  CHECK_FALSE(r.error);
  CHECK(r.output == "vip, seat 3");
  CHECK(patterns_of(r.trace, 0) == std::vector<std::string>{"F F"});
  CHECK(patterns_of(r.trace, 1) == std::vector<std::string>{"TT T"});
  CHECK(patterns_of(r.trace, 2).empty());
  CHECK(r.trace.entries == std::set<std::string>{"describe"});
  CHECK(r.trace.program_hash == p.program.program.source_hash);
}

TEST_CASE("complex pattern program evaluates every condition true") {
  Pipeline p = build_file(corpus_path("complex_pattern.rps"));
  EvalResult r = evaluate(p.program, p.ds, "main", {});
  CHECK_FALSE(r.error);
  CHECK(r.output == "First value is 1\n");
  CHECK(patterns_of(r.trace, 0) == std::vector<std::string>{"TTTTT T"});
}

TEST_CASE("short-circuit skips later conditions and calls") {
  Pipeline p = build(R"(
fn f() -> bool { print!("called"); true }
fn g() -> bool {
    if false && f() { return true; }
    false
}
)");
  EvalResult r = evaluate(p.program, p.ds, "g", {});
  CHECK(r.output.empty());
  CHECK_FALSE(r.trace.entries.count("f"));
  CHECK(patterns_of(r.trace, 0) == std::vector<std::string>{"F- F"});
}

TEST_CASE("boolean decisions record exactly the short-circuit vector") {
  std::mt19937 rng(12);
  for (int round = 0; round < 40; ++round) {
    int n = 2 + static_cast<int>(rng() % 4);
    std::function<std::string(int, int)> make = [&](int lo, int hi) -> std::string {
      if (lo == hi) return (rng() % 4 == 0 ? "!c" : "c") + std::to_string(lo);
      int split = lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo));
      std::string op = rng() % 2 ? " && " : " || ";
      return "(" + make(lo, split) + op + make(split + 1, hi) + ")";
    };
    std::string expr = make(0, n - 1), params;
    for (int k = 0; k < n; ++k) params += (k ? ", c" : "c") + std::to_string(k) + ": bool";
    Pipeline p = build("fn f(" + params + ") -> bool { " + expr + " }");
    REQUIRE(p.ds.decisions.size() == 1);
    const Decision& d = p.ds.decisions[0];
    REQUIRE(d.conditions.size() == static_cast<std::size_t>(n));
    CAPTURE(expr);
    for (unsigned bits = 0; bits < (1U << n); ++bits) {
      std::vector<bool> values;
      std::vector<Value> args;
      for (int k = 0; k < n; ++k) {
        values.push_back((bits >> k) & 1U);
        args.push_back(Value::boolean(values.back()));
      }
      EvalResult r = evaluate(p.program, p.ds, "f", args);
      REQUIRE(r.trace.vectors.size() == 1);
      std::vector<TriState> seen;
      bool outcome = evaluate_short_circuit(d.structure, values, seen);
      CHECK(r.trace.vectors[0].conds == seen);
      CHECK(r.trace.vectors[0].outcome == outcome);
      CHECK(*r.value == Value::boolean(outcome));
    }
  }
}

TEST_CASE("a match evaluation visits arms in order and stops at the first match") {
  Pipeline p = build_file(corpus_path("enum_match.rps"));
  TypePtr person = p.program.env->resolve(parse_type("Person"));
  for (const char* arg : {"Person::Crew", "Person::Passenger(0)", "Person::Passenger(8)", "Person::Passenger(9)",
                          "Person::Passenger(65535)"}) {
    EvalResult r = evaluate(p.program, p.ds, "describe", {constant_from_source(arg, person, *p.program.env)});
    CAPTURE(arg);
    REQUIRE_FALSE(r.trace.vectors.empty());
    std::vector<EvaluationVector> visits = r.trace.vectors;
    std::sort(visits.begin(), visits.end(), [](const auto& a, const auto& b) { return a.seq < b.seq; });
    for (std::size_t k = 0; k + 1 < visits.size(); ++k) {
      CHECK_FALSE(visits[k].outcome);
      CHECK(visits[k].decision < visits[k + 1].decision);
    }
    if (visits.back().decision != 2) CHECK(visits.back().outcome);
  }
}

TEST_CASE("runtime errors") {
  CHECK(runtime_error_of("fn f(x: u8) -> u8 { x + 1 }", "f", {Value::integer(255)}) == "attempt to add with overflow");
  CHECK(runtime_error_of("fn f(x: i32) -> i32 { 10 / x }", "f", {Value::integer(0)}) == "attempt to divide by zero");
  CHECK(runtime_error_of("fn f() { panic!(\"boom {}\", 1); }", "f", {}) == "panicked: boom 1");
  CHECK(runtime_error_of("fn f(x: &[u8]) -> u8 { x[3] }", "f", {Value::array({})}).find("index out of bounds") == 0);
  RunOptions tight;
  tight.fuel = 1000;
  CHECK(runtime_error_of("fn f() { let mut i: u32 = 0; while true { i = i; } }", "f", {}, tight) == "out of fuel");
  RunOptions shallow;
  shallow.max_depth = 50;
  CHECK(runtime_error_of("fn f(n: u32) -> u32 { f(n + 1) }", "f", {Value::integer(0)}, shallow).find("stack overflow") ==
        0);
  CHECK(runtime_error_of("fn f(n: u32) -> u32 { f(n + 1) }", "f", {Value::integer(0)}).find("stack overflow") == 0);
}

TEST_CASE("trace before a runtime error is kept") {
  Pipeline p = build(R"(
fn f(x: u8) -> u8 {
    let y = x;
    if y > 3 { print!("big"); }
    y + 250
}
)");
  EvalResult r = evaluate(p.program, p.ds, "f", {Value::integer(10)});
  REQUIRE(r.error);
  CHECK(r.output == "big");
  CHECK(r.trace.vectors.size() == 1);
  CHECK(r.trace.statements.size() >= 2);
  CHECK(r.trace.entries.count("f"));
}

TEST_CASE("fuel can come from the environment") {
  CHECK(default_run_options().fuel > 0);
  CHECK(default_run_options().max_depth == 400);
}

TEST_CASE("run_suite on an empty suite") {
  Pipeline p = build_file(corpus_path("enum_match.rps"));
  SuiteResult r = run_suite(p.program, p.ds, {});
  CHECK(r.results.empty());
  CHECK(r.failures() == 0);
  CHECK(r.trace.vectors.empty());
  CHECK(r.trace.statements.empty());
  CHECK(r.trace.program_hash == p.program.program.source_hash);
}

TEST_CASE("run_suite: disjoint suites merge to the union") {
  for (const auto& name : corpus_suites()) {
    CAPTURE(name);
    Pipeline p = build_file(corpus_path(name + ".rps"));
    auto suite = suite_of(p, corpus_path(name + ".suite.json"));
    std::size_t half = suite.size() / 2;
    std::vector<TestCase> a(suite.begin(), suite.begin() + static_cast<std::ptrdiff_t>(half));
    std::vector<TestCase> b(suite.begin() + static_cast<std::ptrdiff_t>(half), suite.end());
    Trace merged = run_suite(p.program, p.ds, a).trace;
    merged.merge(run_suite(p.program, p.ds, b).trace);
    SuiteResult all = run_suite(p.program, p.ds, suite);
    CHECK(merged == all.trace);
    CHECK(all.failures() == 0);
    CHECK(run_suite_serial(p.program, p.ds, suite).trace == all.trace);
  }
}

TEST_CASE("the three-case enum suite") {
  Pipeline p = build_file(corpus_path("enum_match.rps"));
  auto suite = suite_of(p, corpus_path("enum_match.suite.json"));
  suite.resize(3);
  SuiteResult r = run_suite(p.program, p.ds, suite);
  REQUIRE(r.results.size() == 3);
  for (const auto& t : r.results) CHECK(t.passed);
  CHECK(patterns_of(r.trace, 0) == std::vector<std::string>{"F F", "F F", "T T"});
  CHECK(patterns_of(r.trace, 1) == std::vector<std::string>{"TF F", "TT T"});
  CHECK(patterns_of(r.trace, 2) == std::vector<std::string>{"T T"});
}

TEST_CASE("test expectations") {
  Pipeline p = build("fn f(x: u8) -> u8 { print!(\"x={x}\"); x }");
  auto suite = load_suite(R"({"tests": [
    {"name": "ok", "entry": "f", "args": ["1"], "expect": "1", "expect_output": "x=1"},
    {"name": "bad value", "entry": "f", "args": ["2"], "expect": "3"},
    {"name": "bad output", "entry": "f", "args": ["2"], "expect_output": "nope"},
    {"name": "no expectation", "entry": "f", "args": ["200"]}
  ]})",
                          p.program);
  SuiteResult r = run_suite(p.program, p.ds, suite);
  REQUIRE(r.results.size() == 4);
  CHECK(r.results[0].passed);
  CHECK_FALSE(r.results[1].passed);
  CHECK(r.results[1].failure.find("expected") != std::string::npos);
  CHECK_FALSE(r.results[2].passed);
  CHECK(r.results[3].passed);
  CHECK(r.results[3].value == "200");
  CHECK(r.failures() == 2);
}

TEST_CASE("suite manifest errors") {
  Pipeline p = build("fn f(x: u8) -> u8 { x }");
  CHECK_THROWS_AS(load_suite("{", p.program), SuiteError);
  CHECK_THROWS_AS(load_suite("[]", p.program), SuiteError);
  CHECK_THROWS_AS(load_suite(R"({"tests": [{"name": "a", "entry": "g", "args": []}]})", p.program), SuiteError);
  CHECK_THROWS_AS(load_suite(R"({"tests": [{"name": "a", "entry": "f", "args": []}]})", p.program), SuiteError);
  CHECK_THROWS_AS(load_suite(R"({"tests": [{"name": "a", "entry": "f", "args": ["1"]},
                                           {"name": "a", "entry": "f", "args": ["2"]}]})",
                             p.program),
                  SuiteError);
  CHECK_THROWS_AS(load_suite(R"({"tests": [{"name": "a", "entry": "f", "args": [1]}]})", p.program), SuiteError);
  CHECK_THROWS_AS(load_suite(R"({"tests": [{"name": "a", "entry": "f", "args": ["true"]}]})", p.program), TypeError);
  CHECK_THROWS_AS(load_suite(R"({"tests": [{"name": "a", "entry": "f", "args": ["1 +"]}]})", p.program), ParseError);
  CHECK(load_suite(R"({"tests": []})", p.program).empty());
}

TEST_CASE("evaluation is deterministic") {
  Pipeline p = build_file(fixture_path("question_mark_twins.rps"));
  auto suite = suite_of(p, fixture_path("question_mark_twins.suite.json"));
  for (const auto& t : suite) {
    EvalResult a = evaluate(p.program, p.ds, t), b = evaluate(p.program, p.ds, t);
    CHECK(a.trace == b.trace);
    CHECK(a.output == b.output);
    CHECK(a.value == b.value);
  }
}

TEST_CASE("trace JSON Lines round trip") {
  Pipeline p = build_file(corpus_path("first_value.rps"));
  SuiteResult r = run_suite(p.program, p.ds, suite_of(p, corpus_path("first_value.suite.json")));
  std::string text = r.trace.to_jsonl();
  Trace back = Trace::from_jsonl(text);
  CHECK(back == r.trace);
  CHECK(back.to_jsonl() == text);
  CHECK(text.rfind("{\"program_hash\":", 0) == 0);
  CHECK(Trace::from_jsonl(text + "\n\n") == r.trace);
}

TEST_CASE("trace format errors") {
  const std::string header = "{\"program_hash\":\"00000000000000ff\"}\n";
  CHECK_THROWS_AS(Trace::from_jsonl(""), TraceFormatError);
  CHECK_THROWS_AS(Trace::from_jsonl("{\"statement\":1}\n"), TraceFormatError);
  CHECK_THROWS_AS(Trace::from_jsonl(header + "not json\n"), TraceFormatError);
  CHECK_THROWS_AS(Trace::from_jsonl(header + "[1]\n"), TraceFormatError);
  CHECK_THROWS_AS(Trace::from_jsonl(header + "{\"mystery\":1}\n"), TraceFormatError);
  CHECK_THROWS_AS(Trace::from_jsonl(header + R"({"decision":0,"conds":["X"],"outcome":true,"seq":0})" "\n"),
                  TraceFormatError);
  CHECK_THROWS_AS(Trace::from_jsonl(header + R"({"decision":0,"conds":["T"],"seq":0})" "\n"), TraceFormatError);
  try {
    Trace::from_jsonl(header + "{\"statement\":\"x\"}\n");
    FAIL("no error");
  } catch (const TraceFormatError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK(Trace::from_jsonl(header).program_hash == 0xff);
}

TEST_CASE("merge is a canonical multiset union") {
  EvaluationVector a{0, {true}, true, 0}, b{0, {false}, false, 0};
  Trace x, y;
  x.vectors = {a, b};
  y.vectors = {a};
  y.statements = {3};
  x.canonicalize();
  y.canonicalize();
  Trace xy = x, yx = y;
  xy.merge(y);
  yx.merge(x);
  CHECK(xy == yx);
  CHECK(xy.vectors.size() == 3);
  CHECK(xy.statements == std::set<int>{3});
  for (std::size_t k = 0; k < xy.vectors.size(); ++k) CHECK(xy.vectors[k].seq == k);
}

TEST_CASE("matches agrees with the interpreter on corpus arms") {
  Pipeline p = build_file(corpus_path("enum_match.rps"));
  const TypeEnv& env = *p.program.env;
  TypePtr person = env.resolve(parse_type("Person"));
  Pattern vip = parse_pattern("Person::Passenger(n @ ..=8)");
  type_pattern(vip, person, env);
  CHECK(matches(vip, constant_from_source("Person::Passenger(8)", person, env), env));
  CHECK_FALSE(matches(vip, constant_from_source("Person::Passenger(9)", person, env), env));
  CHECK_FALSE(matches(vip, constant_from_source("Person::Crew", person, env), env));
}
