#include "mcdc/parser.hpp"

#include "mcdc/lexer.hpp"

namespace mcdc {
namespace {

class Parser {
 public:
  Parser(std::string_view source, const std::string& file) : toks_(tokenize(source, file)) {}

  Program program(const std::string& file) {
    Program prog;
    prog.file = file;
    while (!at_eof()) prog.items.push_back(item());
    prog.next_id = next_id_;
    return prog;
  }

  Pattern standalone_pattern() {
    Pattern p = pattern_top();
    expect_eof();
    return p;
  }

  Expr standalone_expression() {
    Expr e = expression();
    expect_eof();
    return e;
  }

  TypeExpr standalone_type() {
    TypeExpr t = type();
    expect_eof();
    return t;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int next_id_ = 0;

  // ---- token helpers ------------------------------------------------------

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t ahead = 1) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& prev() const { return toks_[pos_ - 1]; }
  bool at_eof() const { return cur().kind == TokenKind::Eof; }
  bool at(std::string_view punct) const { return cur().is_punct(punct); }
  bool at_kw(std::string_view kw) const { return cur().is_keyword(kw); }

  const Token& bump() {
    const Token& t = toks_[pos_];
    if (t.kind != TokenKind::Eof) ++pos_;
    return t;
  }

  bool eat(std::string_view punct) {
    if (!at(punct)) return false;
    bump();
    return true;
  }

  bool eat_kw(std::string_view kw) {
    if (!at_kw(kw)) return false;
    bump();
    return true;
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case TokenKind::Eof: return "end of input";
      case TokenKind::Int: return "integer literal";
      case TokenKind::Char: return "character literal";
      case TokenKind::Str: return "string literal";
      default: return "`" + t.text + "`";
    }
  }

  [[noreturn]] void fail_expected(const std::string& what) const {
    throw ParseError(cur().span, "expected " + what + ", found " + describe(cur()));
  }

  const Token& expect(std::string_view punct) {
    if (!at(punct)) fail_expected("`" + std::string(punct) + "`");
    return bump();
  }

  void expect_kw(std::string_view kw) {
    if (!at_kw(kw)) fail_expected("`" + std::string(kw) + "`");
    bump();
  }

  std::string ident(const char* what = "identifier") {
    if (cur().kind != TokenKind::Ident) fail_expected(what);
    return bump().text;
  }

  void expect_eof() {
    if (!at_eof()) fail_expected("end of input");
  }

  SourceSpan span_from(const SourceSpan& start) const { return cover(start, prev().span); }

  // ---- items --------------------------------------------------------------

  Item item() {
    eat_kw("pub");
    SourceSpan start = cur().span;
    if (eat_kw("enum")) {
      EnumDef def;
      def.name = ident("enum name");
      expect("{");
      while (!at("}")) {
        VariantDef v;
        SourceSpan vstart = cur().span;
        v.name = ident("variant name");
        if (at("(")) {
          v.shape = FieldShape::Tuple;
          tuple_fields(v.field_types);
        } else if (at("{")) {
          v.shape = FieldShape::Named;
          named_fields(v.field_names, v.field_types);
        }
        v.span = span_from(vstart);
        def.variants.push_back(std::move(v));
        if (!eat(",")) break;
      }
      expect("}");
      if (def.variants.empty()) throw ParseError(span_from(start), "enum must have at least one variant");
      def.span = span_from(start);
      return def;
    }
    if (eat_kw("struct")) {
      StructDef def;
      def.name = ident("struct name");
      if (at("(")) {
        def.shape = FieldShape::Tuple;
        tuple_fields(def.field_types);
        expect(";");
      } else if (at("{")) {
        def.shape = FieldShape::Named;
        named_fields(def.field_names, def.field_types);
      } else {
        expect(";");
      }
      def.span = span_from(start);
      return def;
    }
    if (eat_kw("const")) {
      ConstDef def;
      def.name = ident("const name");
      expect(":");
      def.type = type();
      expect("=");
      def.value = expression();
      expect(";");
      def.span = span_from(start);
      return def;
    }
    if (eat_kw("static")) {
      StaticDef def;
      def.is_mut = eat_kw("mut");
      def.name = ident("static name");
      expect(":");
      def.type = type();
      expect("=");
      def.value = expression();
      expect(";");
      def.span = span_from(start);
      return def;
    }
    if (eat_kw("fn")) {
      FnDef def;
      def.name = ident("function name");
      expect("(");
      while (!at(")")) {
        Param p;
        SourceSpan pstart = cur().span;
        p.is_mut = eat_kw("mut");
        p.name = ident("parameter name");
        expect(":");
        p.type = type();
        p.span = span_from(pstart);
        def.params.push_back(std::move(p));
        if (!eat(",")) break;
      }
      expect(")");
      if (eat("->")) def.return_type = type();
      if (!at("{")) fail_expected("`{`");
      def.body = block();
      def.span = span_from(start);
      return def;
    }
    fail_expected("item (`enum`, `struct`, `const`, `static` or `fn`)");
  }

  void tuple_fields(std::vector<TypeExpr>& types) {
    expect("(");
    while (!at(")")) {
      eat_kw("pub");
      types.push_back(type());
      if (!eat(",")) break;
    }
    expect(")");
  }

  void named_fields(std::vector<std::string>& names, std::vector<TypeExpr>& types) {
    expect("{");
    while (!at("}")) {
      eat_kw("pub");
      names.push_back(ident("field name"));
      expect(":");
      types.push_back(type());
      if (!eat(",")) break;
    }
    expect("}");
  }

  // ---- types --------------------------------------------------------------

  TypeExpr type() {
    TypeExpr t;
    SourceSpan start = cur().span;
    if (eat("&&")) {
      // `&&T` is a reference to a reference.
      TypeExpr inner;
      inner.kind = TypeExpr::Kind::Ref;
      inner.is_mut = eat_kw("mut");
      inner.args.push_back(type());
      inner.span = span_from(start);
      inner.span.start_col += 1;
      t.kind = TypeExpr::Kind::Ref;
      t.args.push_back(std::move(inner));
    } else if (eat("&")) {
      t.kind = TypeExpr::Kind::Ref;
      t.is_mut = eat_kw("mut");
      t.args.push_back(type());
    } else if (eat("(")) {
      t.kind = TypeExpr::Kind::Tuple;
      bool trailing_comma = false;
      while (!at(")")) {
        t.args.push_back(type());
        trailing_comma = eat(",");
        if (!trailing_comma) break;
      }
      expect(")");
      // `(T)` is just T.
      if (t.args.size() == 1 && !trailing_comma) {
        TypeExpr inner = std::move(t.args[0]);
        inner.span = span_from(start);
        return inner;
      }
    } else if (eat("[")) {
      TypeExpr elem = type();
      if (eat(";")) {
        t.kind = TypeExpr::Kind::Array;
        if (cur().kind != TokenKind::Int) fail_expected("array length");
        t.length = bump().int_value;
      } else {
        t.kind = TypeExpr::Kind::Slice;
      }
      t.args.push_back(std::move(elem));
      expect("]");
    } else {
      t.kind = TypeExpr::Kind::Named;
      t.name = ident("type");
      if (eat("<")) {
        while (!at(">")) {
          t.args.push_back(type());
          if (!eat(",")) break;
        }
        expect(">");
      }
    }
    t.span = span_from(start);
    return t;
  }

  // ---- patterns -----------------------------------------------------------

  Pattern make_pattern(PatternKind kind, const SourceSpan& span) {
    Pattern p;
    p.kind = kind;
    p.span = span;
    p.id = next_id_++;
    return p;
  }

  // pattern := '|'? no_alt ('|' no_alt)*
  Pattern pattern_top() {
    SourceSpan start = cur().span;
    eat("|");
    Pattern first = pattern_no_alt();
    if (!at("|")) return first;
    Pattern alt = make_pattern(PatternKind::Or, start);
    alt.children.push_back(std::move(first));
    while (eat("|")) alt.children.push_back(pattern_no_alt());
    alt.span = span_from(start);
    return alt;
  }

  bool at_literal_start() const {
    const Token& t = cur();
    return t.kind == TokenKind::Int || t.kind == TokenKind::Char || t.kind == TokenKind::Str ||
           t.is_keyword("true") || t.is_keyword("false") ||
           (t.is_punct("-") && peek().kind == TokenKind::Int);
  }

  Literal literal_token() {
    Literal lit;
    if (eat("-")) {
      if (cur().kind != TokenKind::Int) fail_expected("integer literal");
      lit.kind = Literal::Kind::Int;
      lit.i = -bump().int_value;
      return lit;
    }
    const Token& t = bump();
    switch (t.kind) {
      case TokenKind::Int: lit.kind = Literal::Kind::Int; lit.i = t.int_value; break;
      case TokenKind::Char: lit.kind = Literal::Kind::Char; lit.c = t.char_value; break;
      case TokenKind::Str: lit.kind = Literal::Kind::Str; lit.s = t.text; break;
      default:
        lit.kind = Literal::Kind::Bool;
        lit.b = t.text == "true";
    }
    return lit;
  }

  // Whether the token after a `lo..` can start an upper bound.
  bool at_range_bound() const {
    const Token& t = cur();
    return t.kind == TokenKind::Int || t.kind == TokenKind::Char ||
           (t.is_punct("-") && peek().kind == TokenKind::Int);
  }

  Pattern range_from(Literal lo, const SourceSpan& start) {
    Pattern p = make_pattern(PatternKind::Range, start);
    p.lo = std::move(lo);
    if (eat("..=") || eat("...")) {
      if (!at_range_bound()) fail_expected("range upper bound");
      p.hi = literal_token();
      p.inclusive = true;
    } else {
      expect("..");
      if (at_range_bound()) {
        p.hi = literal_token();
        p.inclusive = false;
      } else {
        p.inclusive = false;  // half-open `lo..`
      }
    }
    p.span = span_from(start);
    return p;
  }

  Pattern pattern_no_alt() {
    SourceSpan start = cur().span;

    if (eat("_")) return make_pattern(PatternKind::Wildcard, start);

    if (at("..=")) {
      bump();
      if (!at_range_bound()) fail_expected("range upper bound");
      Pattern p = make_pattern(PatternKind::Range, start);
      p.hi = literal_token();
      p.inclusive = true;
      p.span = span_from(start);
      return p;
    }
    if (eat("..")) {
      if (!at_range_bound()) return make_pattern(PatternKind::Rest, start);
      Pattern p = make_pattern(PatternKind::Range, start);
      p.hi = literal_token();
      p.inclusive = false;
      p.span = span_from(start);
      return p;
    }

    if (at("&") || at("&&")) {
      bool doubled = at("&&");
      bump();
      Pattern ref = make_pattern(PatternKind::Reference, start);
      ref.is_mut = eat_kw("mut");
      Pattern inner = pattern_without_range();
      if (at("..=") || at("..") || at("..."))
        throw ParseError(cover(start, cur().span),
                         "ambiguous range pattern after `&`; write `&(lo..=hi)` or `(&lo)..=hi`");
      if (doubled) {
        Pattern mid = make_pattern(PatternKind::Reference, start);
        mid.children.push_back(std::move(inner));
        mid.span = span_from(start);
        mid.span.start_col += 1;
        ref.children.push_back(std::move(mid));
      } else {
        ref.children.push_back(std::move(inner));
      }
      ref.span = span_from(start);
      return ref;
    }

    if (at_literal_start()) {
      Literal lit = literal_token();
      if (at("..=") || at("..") || at("...")) {
        if (lit.kind == Literal::Kind::Bool || lit.kind == Literal::Kind::Str)
          throw ParseError(span_from(start), "range bounds must be integer or char literals");
        return range_from(std::move(lit), start);
      }
      Pattern p = make_pattern(PatternKind::Literal, start);
      p.literal = std::move(lit);
      p.span = span_from(start);
      return p;
    }

    return pattern_without_range_rest(start);
  }

  // A pattern that may not be a range (operand of `&`).
  Pattern pattern_without_range() {
    SourceSpan start = cur().span;
    if (eat("_")) return make_pattern(PatternKind::Wildcard, start);
    if (at("&") || at("&&")) return pattern_no_alt();
    if (at_literal_start()) {
      Pattern p = make_pattern(PatternKind::Literal, start);
      p.literal = literal_token();
      p.span = span_from(start);
      return p;
    }
    return pattern_without_range_rest(start);
  }

  Pattern pattern_without_range_rest(const SourceSpan& start) {
    if (eat("(")) {
      if (eat(")")) {
        Pattern unit = make_pattern(PatternKind::Tuple, start);
        unit.span = span_from(start);
        return unit;
      }
      Pattern first = pattern_top();
      if (eat(")")) {
        Pattern g = make_pattern(PatternKind::Grouped, start);
        g.children.push_back(std::move(first));
        g.span = span_from(start);
        return g;
      }
      Pattern tup = make_pattern(PatternKind::Tuple, start);
      tup.children.push_back(std::move(first));
      while (eat(",")) {
        if (at(")")) break;
        tup.children.push_back(pattern_top());
      }
      expect(")");
      tup.span = span_from(start);
      return tup;
    }

    if (eat("[")) {
      Pattern slice = make_pattern(PatternKind::Slice, start);
      while (!at("]")) {
        slice.children.push_back(pattern_top());
        if (!eat(",")) break;
      }
      expect("]");
      slice.span = span_from(start);
      int rests = 0;
      for (const auto& c : slice.children)
        if (c.kind == PatternKind::Rest || (c.kind == PatternKind::Identifier && !c.children.empty() &&
                                            c.children[0].kind == PatternKind::Rest))
          ++rests;
      if (rests > 1) throw ParseError(slice.span, "at most one `..` is allowed in a slice pattern");
      return slice;
    }

    if (at_kw("ref") || at_kw("mut")) {
      Pattern id = make_pattern(PatternKind::Identifier, start);
      id.by_ref = eat_kw("ref");
      id.is_mut = eat_kw("mut");
      id.name = ident("binding name");
      if (eat("@")) id.children.push_back(pattern_no_alt());
      id.span = span_from(start);
      return id;
    }

    if (cur().kind == TokenKind::Ident) {
      Path path{bump().text};
      while (eat("::")) path.push_back(ident("path segment"));

      if (path.size() == 1 && at("@")) {
        bump();
        Pattern id = make_pattern(PatternKind::Identifier, start);
        id.name = path[0];
        id.children.push_back(pattern_no_alt());
        id.span = span_from(start);
        return id;
      }
      if (eat("(")) {
        Pattern ts = make_pattern(PatternKind::TupleStruct, start);
        ts.path = std::move(path);
        while (!at(")")) {
          ts.children.push_back(pattern_top());
          if (!eat(",")) break;
        }
        expect(")");
        ts.span = span_from(start);
        return ts;
      }
      if (eat("{")) {
        Pattern st = make_pattern(PatternKind::Struct, start);
        st.path = std::move(path);
        while (!at("}")) {
          if (eat("..")) {
            st.has_rest = true;
            break;
          }
          SourceSpan fstart = cur().span;
          if (at_kw("ref") || at_kw("mut")) {
            Pattern id = make_pattern(PatternKind::Identifier, fstart);
            id.by_ref = eat_kw("ref");
            id.is_mut = eat_kw("mut");
            id.name = ident("field name");
            id.span = span_from(fstart);
            st.fields.push_back(id.name);
            st.children.push_back(std::move(id));
          } else {
            std::string field = ident("field name");
            st.fields.push_back(field);
            if (eat(":")) {
              st.children.push_back(pattern_top());
            } else {
              Pattern id = make_pattern(PatternKind::Identifier, fstart);
              id.name = field;
              id.span = span_from(fstart);
              st.children.push_back(std::move(id));
            }
          }
          if (!eat(",")) break;
        }
        expect("}");
        st.span = span_from(start);
        return st;
      }
      if (path.size() == 1) {
        Pattern id = make_pattern(PatternKind::Identifier, start);
        id.name = path[0];
        id.ambiguous = true;
        id.span = span_from(start);
        return id;
      }
      Pattern p = make_pattern(PatternKind::Path, start);
      p.path = std::move(path);
      p.span = span_from(start);
      return p;
    }

    fail_expected("pattern");
  }

  // ---- expressions --------------------------------------------------------

  Expr make_expr(ExprKind kind, const SourceSpan& span) {
    Expr e;
    e.kind = kind;
    e.span = span;
    e.id = next_id_++;
    return e;
  }

  Expr expression(bool no_struct = false) { return assignment(no_struct); }

  Expr assignment(bool no_struct) {
    SourceSpan start = cur().span;
    Expr lhs = logical_or(no_struct);
    static const std::pair<const char*, std::optional<BinaryOp>> kAssignOps[] = {
        {"=", std::nullopt},    {"+=", BinaryOp::Add}, {"-=", BinaryOp::Sub},
        {"*=", BinaryOp::Mul}, {"/=", BinaryOp::Div}, {"%=", BinaryOp::Rem},
    };
    for (const auto& [tok, op] : kAssignOps) {
      if (at(tok)) {
        bump();
        Expr assign = make_expr(ExprKind::Assign, start);
        assign.compound = op;
        assign.kids.push_back(std::move(lhs));
        assign.kids.push_back(assignment(no_struct));
        assign.span = span_from(start);
        return assign;
      }
    }
    return lhs;
  }

  Expr binary(Expr lhs, BinaryOp op, Expr rhs, const SourceSpan& start) {
    Expr e = make_expr(ExprKind::Binary, start);
    e.binary_op = op;
    e.kids.push_back(std::move(lhs));
    e.kids.push_back(std::move(rhs));
    e.span = span_from(start);
    return e;
  }

  Expr logical_or(bool ns) {
    SourceSpan start = cur().span;
    Expr lhs = logical_and(ns);
    while (eat("||")) lhs = binary(std::move(lhs), BinaryOp::Or, logical_and(ns), start);
    return lhs;
  }

  Expr logical_and(bool ns) {
    SourceSpan start = cur().span;
    Expr lhs = comparison(ns);
    while (eat("&&")) lhs = binary(std::move(lhs), BinaryOp::And, comparison(ns), start);
    return lhs;
  }

  Expr comparison(bool ns) {
    SourceSpan start = cur().span;
    Expr lhs = additive(ns);
    static const std::pair<const char*, BinaryOp> kOps[] = {
        {"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne}, {"<=", BinaryOp::Le},
        {">=", BinaryOp::Ge}, {"<", BinaryOp::Lt},  {">", BinaryOp::Gt},
    };
    for (const auto& [tok, op] : kOps) {
      if (at(tok)) {
        bump();
        Expr rhs = additive(ns);
        Expr out = binary(std::move(lhs), op, std::move(rhs), start);
        for (const auto& [tok2, op2] : kOps)
          if (at(tok2)) throw ParseError(cur().span, "comparison operators cannot be chained");
        return out;
      }
    }
    return lhs;
  }

  Expr additive(bool ns) {
    SourceSpan start = cur().span;
    Expr lhs = multiplicative(ns);
    while (true) {
      if (eat("+")) lhs = binary(std::move(lhs), BinaryOp::Add, multiplicative(ns), start);
      else if (eat("-")) lhs = binary(std::move(lhs), BinaryOp::Sub, multiplicative(ns), start);
      else return lhs;
    }
  }

  Expr multiplicative(bool ns) {
    SourceSpan start = cur().span;
    Expr lhs = unary(ns);
    while (true) {
      if (eat("*")) lhs = binary(std::move(lhs), BinaryOp::Mul, unary(ns), start);
      else if (eat("/")) lhs = binary(std::move(lhs), BinaryOp::Div, unary(ns), start);
      else if (eat("%")) lhs = binary(std::move(lhs), BinaryOp::Rem, unary(ns), start);
      else return lhs;
    }
  }

  Expr unary(bool ns) {
    SourceSpan start = cur().span;
    if (eat("-")) {
      Expr e = make_expr(ExprKind::Unary, start);
      e.unary_op = UnaryOp::Neg;
      e.kids.push_back(unary(ns));
      e.span = span_from(start);
      return e;
    }
    if (eat("!")) {
      Expr e = make_expr(ExprKind::Unary, start);
      e.unary_op = UnaryOp::Not;
      e.kids.push_back(unary(ns));
      e.span = span_from(start);
      return e;
    }
    if (eat("*")) {
      Expr e = make_expr(ExprKind::Deref, start);
      e.kids.push_back(unary(ns));
      e.span = span_from(start);
      return e;
    }
    if (at("&") || at("&&")) {
      bool doubled = at("&&");
      bump();
      Expr e = make_expr(ExprKind::Ref, start);
      e.is_mut = eat_kw("mut");
      Expr inner = unary(ns);
      if (doubled) {
        Expr mid = make_expr(ExprKind::Ref, start);
        mid.kids.push_back(std::move(inner));
        mid.span = span_from(start);
        mid.span.start_col += 1;
        inner = std::move(mid);
      }
      e.kids.push_back(std::move(inner));
      e.span = span_from(start);
      return e;
    }
    return postfix(ns);
  }

  Expr postfix(bool ns) {
    SourceSpan start = cur().span;
    Expr e = primary(ns);
    while (true) {
      if (eat("?")) {
        Expr q = make_expr(ExprKind::QuestionMark, start);
        q.kids.push_back(std::move(e));
        q.span = span_from(start);
        e = std::move(q);
      } else if (eat("[")) {
        Expr idx = make_expr(ExprKind::Index, start);
        idx.kids.push_back(std::move(e));
        idx.kids.push_back(expression());
        expect("]");
        idx.span = span_from(start);
        e = std::move(idx);
      } else if (eat(".")) {
        if (cur().kind == TokenKind::Int) {
          Expr f = make_expr(ExprKind::Field, start);
          f.name = std::to_string(bump().int_value);
          f.kids.push_back(std::move(e));
          f.span = span_from(start);
          e = std::move(f);
          continue;
        }
        std::string name = ident("field or method name");
        if (eat("(")) {
          Expr m = make_expr(ExprKind::MethodCall, start);
          m.name = name;
          m.kids.push_back(std::move(e));
          while (!at(")")) {
            m.kids.push_back(expression());
            if (!eat(",")) break;
          }
          expect(")");
          m.span = span_from(start);
          e = std::move(m);
        } else {
          Expr f = make_expr(ExprKind::Field, start);
          f.name = name;
          f.kids.push_back(std::move(e));
          f.span = span_from(start);
          e = std::move(f);
        }
      } else {
        return e;
      }
    }
  }

  Expr primary(bool ns) {
    SourceSpan start = cur().span;
    const Token& t = cur();

    if (t.kind == TokenKind::Int || t.kind == TokenKind::Char || t.kind == TokenKind::Str ||
        t.is_keyword("true") || t.is_keyword("false")) {
      Expr e = make_expr(ExprKind::Literal, start);
      e.literal = literal_token();
      e.span = span_from(start);
      return e;
    }
    if (at("{")) return block();
    if (at_kw("if")) return if_expr();
    if (at_kw("match")) return match_expr();
    if (eat_kw("while")) {
      Expr w = make_expr(ExprKind::While, start);
      w.kids.push_back(expression(true));
      if (!at("{")) fail_expected("`{`");
      w.kids.push_back(block());
      w.span = span_from(start);
      return w;
    }
    if (eat_kw("return")) {
      Expr r = make_expr(ExprKind::Return, start);
      if (!at(";") && !at("}") && !at(",") && !at(")")) r.kids.push_back(expression(ns));
      r.span = span_from(start);
      return r;
    }
    if (eat("(")) {
      if (eat(")")) {
        Expr unit = make_expr(ExprKind::Tuple, start);
        unit.span = span_from(start);
        return unit;
      }
      Expr first = expression();
      if (eat(")")) {
        // Parentheses only group; the span grows to include them.
        first.span = span_from(start);
        return first;
      }
      Expr tup = make_expr(ExprKind::Tuple, start);
      tup.kids.push_back(std::move(first));
      while (eat(",")) {
        if (at(")")) break;
        tup.kids.push_back(expression());
      }
      expect(")");
      tup.span = span_from(start);
      return tup;
    }
    if (eat("[")) {
      Expr arr = make_expr(ExprKind::Array, start);
      while (!at("]")) {
        arr.kids.push_back(expression());
        if (!eat(",")) break;
      }
      expect("]");
      arr.span = span_from(start);
      return arr;
    }
    if (t.kind == TokenKind::Ident) {
      std::string first = bump().text;
      if ((first == "print" || first == "println" || first == "panic") && at("!")) {
        bump();
        Expr p = make_expr(first == "panic" ? ExprKind::Panic : ExprKind::Print, start);
        p.name = first;
        expect("(");
        if (cur().kind == TokenKind::Str) {
          p.literal.kind = Literal::Kind::Str;
          p.literal.s = bump().text;
          while (eat(",")) {
            if (at(")")) break;
            p.kids.push_back(expression());
          }
        } else if (first != "panic" || !at(")")) {
          fail_expected("format string");
        }
        expect(")");
        p.span = span_from(start);
        return p;
      }
      Path path{first};
      while (eat("::")) path.push_back(ident("path segment"));
      if (eat("(")) {
        Expr call = make_expr(ExprKind::Call, start);
        call.path = std::move(path);
        while (!at(")")) {
          call.kids.push_back(expression());
          if (!eat(",")) break;
        }
        expect(")");
        call.span = span_from(start);
        return call;
      }
      if (!ns && at("{") && looks_like_struct_literal()) {
        bump();
        Expr lit = make_expr(ExprKind::StructLit, start);
        lit.path = std::move(path);
        while (!at("}")) {
          SourceSpan fstart = cur().span;
          std::string field = ident("field name");
          lit.fields.push_back(field);
          if (eat(":")) {
            lit.kids.push_back(expression());
          } else {
            Expr short_hand = make_expr(ExprKind::Path, fstart);
            short_hand.path = {field};
            short_hand.span = span_from(fstart);
            lit.kids.push_back(std::move(short_hand));
          }
          if (!eat(",")) break;
        }
        expect("}");
        lit.span = span_from(start);
        return lit;
      }
      Expr p = make_expr(ExprKind::Path, start);
      p.path = std::move(path);
      p.span = span_from(start);
      return p;
    }
    fail_expected("expression");
  }

  // After `Path`, a `{` starts a struct literal when followed by `}` or `ident :`
  // or `ident ,` / `ident }` (shorthand).
  bool looks_like_struct_literal() const {
    const Token& a = peek(1);
    if (a.is_punct("}")) return true;
    if (a.kind != TokenKind::Ident) return false;
    const Token& b = peek(2);
    return b.is_punct(":") || b.is_punct(",") || b.is_punct("}");
  }

  Expr if_expr() {
    SourceSpan start = cur().span;
    expect_kw("if");
    Expr e;
    if (eat_kw("let")) {
      e = make_expr(ExprKind::IfLet, start);
      e.pattern.push_back(pattern_top());
      expect("=");
      e.kids.push_back(expression(true));
    } else {
      e = make_expr(ExprKind::If, start);
      e.kids.push_back(expression(true));
    }
    if (!at("{")) fail_expected("`{`");
    e.kids.push_back(block());
    if (eat_kw("else")) {
      if (at_kw("if")) e.kids.push_back(if_expr());
      else if (at("{")) e.kids.push_back(block());
      else fail_expected("`{` or `if` after `else`");
    }
    e.span = span_from(start);
    return e;
  }

  Expr match_expr() {
    SourceSpan start = cur().span;
    expect_kw("match");
    Expr m = make_expr(ExprKind::Match, start);
    m.kids.push_back(expression(true));
    expect("{");
    while (!at("}")) {
      MatchArm arm;
      SourceSpan astart = cur().span;
      arm.id = next_id_++;
      arm.pattern = pattern_top();
      if (eat_kw("if")) arm.guard = expression();
      expect("=>");
      arm.body = expression();
      bool block_like = arm.body.kind == ExprKind::Block || arm.body.kind == ExprKind::If ||
                        arm.body.kind == ExprKind::IfLet || arm.body.kind == ExprKind::Match ||
                        arm.body.kind == ExprKind::While;
      arm.span = span_from(astart);
      m.arms.push_back(std::move(arm));
      if (!eat(",") && !block_like) break;
    }
    expect("}");
    if (m.arms.empty()) throw ParseError(span_from(start), "match must have at least one arm");
    m.span = span_from(start);
    return m;
  }

  static bool is_block_like(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Block:
      case ExprKind::If:
      case ExprKind::IfLet:
      case ExprKind::Match:
      case ExprKind::While: return true;
      default: return false;
    }
  }

  Expr block() {
    SourceSpan start = cur().span;
    expect("{");
    Expr b = make_expr(ExprKind::Block, start);
    while (!at("}")) {
      SourceSpan sstart = cur().span;
      if (eat(";")) continue;
      if (eat_kw("let")) {
        Stmt s;
        s.kind = Stmt::Kind::Let;
        s.id = next_id_++;
        s.pattern = pattern_top();
        if (eat(":")) s.type_annotation = type();
        if (eat("=")) {
          s.init = expression();
          if (eat_kw("else")) {
            if (!at("{")) fail_expected("`{` after `else`");
            s.else_block = block();
          }
        }
        expect(";");
        s.has_semi = true;
        s.span = span_from(sstart);
        b.stmts.push_back(std::move(s));
        continue;
      }
      Expr e;
      bool statement_like = at("{") || at_kw("if") || at_kw("match") || at_kw("while");
      if (statement_like) {
        e = primary(false);
        // A block-like expression followed by an operator continues as an
        // ordinary expression only when it is the block tail.
        if (!at("}") && !at(";")) {
          Stmt s;
          s.kind = Stmt::Kind::Expr;
          s.id = next_id_++;
          s.expr = std::move(e);
          s.span = span_from(sstart);
          b.stmts.push_back(std::move(s));
          continue;
        }
      } else {
        e = expression();
      }
      if (eat(";")) {
        Stmt s;
        s.kind = Stmt::Kind::Expr;
        s.id = next_id_++;
        s.expr = std::move(e);
        s.has_semi = true;
        s.span = span_from(sstart);
        b.stmts.push_back(std::move(s));
        continue;
      }
      if (!at("}")) fail_expected("`;` or `}`");
      b.kids.push_back(std::move(e));
      b.has_tail = true;
    }
    expect("}");
    b.span = span_from(start);
    return b;
  }
};

}  // namespace

Program parse_program(std::string_view source, const std::string& file) {
  Program p = Parser(source, file).program(file);
  p.source_hash = fnv1a64(source);
  return p;
}

Pattern parse_pattern(std::string_view source, const std::string& file) {
  return Parser(source, file).standalone_pattern();
}

Expr parse_expression(std::string_view source, const std::string& file) {
  return Parser(source, file).standalone_expression();
}

TypeExpr parse_type(std::string_view source, const std::string& file) {
  return Parser(source, file).standalone_type();
}

}  // namespace mcdc
