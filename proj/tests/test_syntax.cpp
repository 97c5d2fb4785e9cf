#include <filesystem>

#include "doctest.h"
#include "mcdc/format.hpp"
#include "mcdc/lexer.hpp"
#include "mcdc/printer.hpp"
#include "support.hpp"

using namespace mcdc;
using namespace testing_support;

namespace {

std::vector<std::string> source_files() {
  std::vector<std::string> out;
  for (const char* dir : {MCDC_CORPUS_DIR, MCDC_FIXTURE_DIR})
    for (const auto& entry : std::filesystem::directory_iterator(dir))
      if (entry.path().extension() == ".rps") out.push_back(entry.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

struct SpanChecker {
  std::vector<std::string> violations;

  void child(const SourceSpan& parent, const SourceSpan& c, const std::string& what) {
    if (!parent.contains(c)) violations.push_back(what + " " + c.str() + " outside " + parent.str());
  }

  void pattern(const Pattern& p) {
    for (const auto& c : p.children) {
      child(p.span, c.span, "pattern");
      pattern(c);
    }
  }

  void expr(const Expr& e) {
    for (const auto& k : e.kids) {
      child(e.span, k.span, "expr");
      expr(k);
    }
    for (const auto& s : e.stmts) {
      child(e.span, s.span, "stmt");
      if (s.kind == Stmt::Kind::Let) {
        child(s.span, s.pattern.span, "let pattern");
        pattern(s.pattern);
        if (s.init) child(s.span, s.init->span, "init"), expr(*s.init);
        if (s.else_block) child(s.span, s.else_block->span, "else"), expr(*s.else_block);
      } else {
        child(s.span, s.expr.span, "stmt expr");
        expr(s.expr);
      }
    }
    for (const auto& arm : e.arms) {
      child(e.span, arm.span, "arm");
      child(arm.span, arm.pattern.span, "arm pattern");
      pattern(arm.pattern);
      if (arm.guard) child(arm.span, arm.guard->span, "guard"), expr(*arm.guard);
      child(arm.span, arm.body.span, "arm body");
      expr(arm.body);
    }
    for (const auto& p : e.pattern) {
      child(e.span, p.span, "if-let pattern");
      pattern(p);
    }
  }

  void program(const Program& p) {
    for (const auto& item : p.items)
      if (const auto* f = std::get_if<FnDef>(&item)) {
        child(f->span, f->body.span, "body");
        expr(f->body);
      }
  }
};

}  // namespace

TEST_CASE("enum declaration with a payload variant") {
  Program p = parse_program("enum Person { Crew, Passenger(u16) }");
  REQUIRE(p.items.size() == 1);
  const auto& e = std::get<EnumDef>(p.items[0]);
  CHECK(e.name == "Person");
  REQUIRE(e.variants.size() == 2);
  CHECK(e.variants[0].shape == FieldShape::Unit);
  CHECK(e.variants[1].shape == FieldShape::Tuple);
  REQUIRE(e.variants[1].field_types.size() == 1);
  CHECK(e.variants[1].field_types[0].name == "u16");
}

TEST_CASE("empty file is an empty program") {
  CHECK(parse_program("").items.empty());
  CHECK(parse_program("  // only a comment\n").items.empty());
}

TEST_CASE("match with literal and half-open range arms") {
  Expr e = parse_expression("match number { 0 => f(), 2.. => g(), }");
  REQUIRE(e.kind == ExprKind::Match);
  REQUIRE(e.arms.size() == 2);
  CHECK(e.arms[0].pattern.kind == PatternKind::Literal);
  CHECK(e.arms[0].pattern.literal.i == 0);
  const Pattern& r = e.arms[1].pattern;
  CHECK(r.kind == PatternKind::Range);
  REQUIRE(r.lo);
  CHECK(r.lo->i == 2);
  CHECK_FALSE(r.hi);
}

TEST_CASE("sub-pattern decomposition of a slice pattern") {
  Pattern p = parse_pattern("[Some(var), Some(2..=8), rest @ ..]");
  CHECK(p.kind == PatternKind::Slice);
  REQUIRE(p.children.size() == 3);
  CHECK(p.children[0].kind == PatternKind::TupleStruct);
  CHECK(p.children[1].kind == PatternKind::TupleStruct);
  CHECK(p.children[2].kind == PatternKind::Identifier);
  CHECK(p.children[0].children[0].kind == PatternKind::Identifier);
  CHECK(p.children[0].children[0].name == "var");
  const Pattern& range = p.children[1].children[0];
  CHECK(range.kind == PatternKind::Range);
  CHECK(range.lo->i == 2);
  CHECK(range.hi->i == 8);
  CHECK(range.inclusive);
  CHECK(p.children[2].name == "rest");
  CHECK(p.children[2].children[0].kind == PatternKind::Rest);
}

TEST_CASE("single wildcard") {
  Pattern p = parse_pattern("_");
  CHECK(p.kind == PatternKind::Wildcard);
  CHECK(p.children.empty());
}

TEST_CASE("reference to a range needs grouping") {
  Pattern p = parse_pattern("&(0..=5)");
  CHECK(p.kind == PatternKind::Reference);
  REQUIRE(p.children.size() == 1);
  CHECK(p.children[0].kind == PatternKind::Grouped);
  CHECK(p.children[0].children[0].kind == PatternKind::Range);
  CHECK_THROWS_AS(parse_pattern("&0..=5"), ParseError);
  CHECK_THROWS_AS(parse_pattern("&0.."), ParseError);
}

TEST_CASE("range pattern forms") {
  Pattern excl = parse_pattern("..10");
  CHECK(excl.kind == PatternKind::Range);
  CHECK_FALSE(excl.lo);
  CHECK(excl.hi->i == 10);
  CHECK_FALSE(excl.inclusive);
  Pattern incl = parse_pattern("..=10");
  CHECK(incl.inclusive);
  Pattern neg = parse_pattern("-5..=-1");
  CHECK(neg.lo->i == -5);
  CHECK(neg.hi->i == -1);
  Pattern chars = parse_pattern("'a'..='z'");
  CHECK(chars.lo->kind == Literal::Kind::Char);
  CHECK(parse_pattern("..").kind == PatternKind::Rest);
}

TEST_CASE("parenthesised patterns: grouping versus tuples") {
  CHECK(parse_pattern("(x)").kind == PatternKind::Grouped);
  CHECK(parse_pattern("(x,)").kind == PatternKind::Tuple);
  CHECK(parse_pattern("()").kind == PatternKind::Tuple);
  CHECK(parse_pattern("(a, .., b)").children.size() == 3);
}

TEST_CASE("identifier and path patterns stay ambiguous until resolution") {
  Pattern id = parse_pattern("value");
  CHECK(id.kind == PatternKind::Identifier);
  CHECK(id.ambiguous);
  Pattern path = parse_pattern("Person::Crew");
  CHECK(path.kind == PatternKind::Path);
  Pattern bound = parse_pattern("ref mut x");
  CHECK(bound.by_ref);
  CHECK(bound.is_mut);
  CHECK_FALSE(bound.ambiguous);
}

TEST_CASE("or patterns, struct patterns and nested references") {
  Pattern alt = parse_pattern("A | B | C");
  CHECK(alt.kind == PatternKind::Or);
  CHECK(alt.children.size() == 3);
  Pattern s = parse_pattern("Point { x: 0, y, .. }");
  CHECK(s.kind == PatternKind::Struct);
  CHECK(s.fields == std::vector<std::string>{"x", "y"});
  CHECK(s.has_rest);
  Pattern rr = parse_pattern("&&x");
  CHECK(rr.kind == PatternKind::Reference);
  CHECK(rr.children[0].kind == PatternKind::Reference);
  CHECK(rr.span.contains(rr.children[0].span));
}

TEST_CASE("parse errors carry a span and the expected token") {
  try {
    parse_program("fn f( {");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.span().start_line == 1);
    CHECK(e.message().find("expected") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_program("fn f() { let = 3; }"), ParseError);
  CHECK_THROWS_AS(parse_program("enum E { }"), ParseError);
  CHECK_THROWS_AS(parse_program("fn f() { 1 + }"), ParseError);
  CHECK_THROWS_AS(parse_pattern("Some("), ParseError);
}

TEST_CASE("lexer") {
  auto toks = tokenize("let x: u8 = 0x1F; // c\n'a' \"s\\n\" ..=", "<t>");
  REQUIRE(toks.size() >= 9);
  CHECK(toks[0].is_keyword("let"));
  CHECK(toks[1].kind == TokenKind::Ident);
  CHECK(toks[5].int_value == 31);
  CHECK(toks[7].char_value == U'a');
  CHECK(toks[8].kind == TokenKind::Str);
  CHECK(toks[8].text == "s\n");
  CHECK(toks[9].is_punct("..="));
  CHECK(toks.back().kind == TokenKind::Eof);
  CHECK_THROWS_AS(tokenize("let $", "<t>"), ParseError);
  CHECK_THROWS_AS(tokenize("\"open", "<t>"), ParseError);
}

TEST_CASE("format strings") {
  SourceSpan span;
  auto pieces = parse_format("a {} b {name} {{c}}", span);
  REQUIRE(pieces.size() == 5);
  CHECK(pieces[1].kind == FormatPiece::Kind::Next);
  CHECK(pieces[3].kind == FormatPiece::Kind::Named);
  CHECK(pieces[3].text == "name");
  CHECK(pieces[4].text == " {c}");
  CHECK_THROWS_AS(parse_format("a {", span), TypeError);
}

TEST_CASE("round trip: printed programs re-parse to the same tree") {
  auto files = source_files();
  REQUIRE(files.size() >= 8);
  for (const auto& f : files) {
    CAPTURE(f);
    Program p = parse_program(read_text(f), f);
    std::string printed = print_program(p);
    Program again = parse_program(printed, f);
    CHECK(dump(again) == dump(p));
    CHECK(print_program(again) == printed);
  }
}

TEST_CASE("round trip: generated patterns") {
  PatternGenerator gen(11);
  for (int k = 0; k < 400; ++k) {
    GeneratedPattern g = gen.next();
    Pattern p = parse_pattern(g.pattern_text);
    CAPTURE(g.pattern_text);
    CHECK(dump(parse_pattern(print_pattern(p))) == dump(p));
  }
}

TEST_CASE("round trip: type annotations") {
  for (const char* t : {"u8", "&[Option<i32>]", "(bool, [u8; 3])", "&&mut Person", "Result<(), Fault>"}) {
    CAPTURE(t);
    CHECK(print_type(parse_type(t)) == t);
  }
}

TEST_CASE("span containment over the corpus") {
  for (const auto& f : source_files()) {
    CAPTURE(f);
    SpanChecker checker;
    checker.program(parse_program(read_text(f), f));
    CHECK(checker.violations.empty());
    if (!checker.violations.empty()) MESSAGE(checker.violations.front());
  }
}

TEST_CASE("node ids are unique") {
  Program p = parse_program(read_text(corpus_path("enum_match.rps")));
  std::set<int> ids;
  std::function<void(const Pattern&)> pat = [&](const Pattern& x) {
    CHECK(ids.insert(x.id).second);
    for (const auto& c : x.children) pat(c);
  };
  std::function<void(const Expr&)> ex = [&](const Expr& e) {
    CHECK(ids.insert(e.id).second);
    for (const auto& k : e.kids) ex(k);
    for (const auto& s : e.stmts) {
      CHECK(ids.insert(s.id).second);
      if (s.kind == Stmt::Kind::Let) {
        pat(s.pattern);
        if (s.init) ex(*s.init);
      } else {
        ex(s.expr);
      }
    }
    for (const auto& a : e.arms) {
      CHECK(ids.insert(a.id).second);
      pat(a.pattern);
      ex(a.body);
    }
  };
  for (const auto& item : p.items)
    if (const auto* f = std::get_if<FnDef>(&item)) ex(f->body);
  CHECK(*ids.rbegin() < p.next_id);
}
