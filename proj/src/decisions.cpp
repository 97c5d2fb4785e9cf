#include "mcdc/decisions.hpp"

#include <algorithm>
#include <functional>

#include "json.hpp"
#include "mcdc/printer.hpp"
#include "mcdc/value_space.hpp"

namespace mcdc {

namespace {

// Printed expressions span several lines once they contain blocks.
std::string one_line(const std::string& text) {
  std::string out;
  bool space = false;
  for (char ch : text) {
    if (ch == '\n' || ch == ' ' || ch == '\t') {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += ch;
  }
  return out;
}

}  // namespace

const char* to_string(ConditionKind k) {
  switch (k) {
    case ConditionKind::DiscriminantCheck: return "DiscriminantCheck";
    case ConditionKind::LiteralEq: return "LiteralEq";
    case ConditionKind::RangeMembership: return "RangeMembership";
    case ConditionKind::SliceLenCheck: return "SliceLenCheck";
    case ConditionKind::ConstEq: return "ConstEq";
    case ConditionKind::BooleanLeaf: return "BooleanLeaf";
    case ConditionKind::NestedDecisionResult: return "NestedDecisionResult";
  }
  return "?";
}

const char* to_string(DecisionOrigin o) {
  switch (o) {
    case DecisionOrigin::MatchArm: return "MatchArm";
    case DecisionOrigin::IfLet: return "IfLet";
    case DecisionOrigin::LetElse: return "LetElse";
    case DecisionOrigin::BooleanExpr: return "BooleanExpr";
    case DecisionOrigin::Guard: return "Guard";
    case DecisionOrigin::QuestionMark: return "QuestionMark";
  }
  return "?";
}

bool evaluate_structure(const BoolExpr& s, const std::vector<bool>& values) {
  switch (s.kind) {
    case BoolExpr::Kind::True: return true;
    case BoolExpr::Kind::Cond: return values[static_cast<std::size_t>(s.cond)];
    case BoolExpr::Kind::Not: return !evaluate_structure(s.kids[0], values);
    case BoolExpr::Kind::And:
      return std::all_of(s.kids.begin(), s.kids.end(), [&](const BoolExpr& k) { return evaluate_structure(k, values); });
    case BoolExpr::Kind::Or:
      return std::any_of(s.kids.begin(), s.kids.end(), [&](const BoolExpr& k) { return evaluate_structure(k, values); });
  }
  return false;
}

namespace {

bool short_circuit(const BoolExpr& s, const std::vector<bool>& values, std::vector<TriState>& seen) {
  switch (s.kind) {
    case BoolExpr::Kind::True: return true;
    case BoolExpr::Kind::Cond: {
      bool v = values[static_cast<std::size_t>(s.cond)];
      seen[static_cast<std::size_t>(s.cond)] = v;
      return v;
    }
    case BoolExpr::Kind::Not: return !short_circuit(s.kids[0], values, seen);
    case BoolExpr::Kind::And:
      for (const auto& k : s.kids)
        if (!short_circuit(k, values, seen)) return false;
      return true;
    case BoolExpr::Kind::Or:
      for (const auto& k : s.kids)
        if (short_circuit(k, values, seen)) return true;
      return false;
  }
  return false;
}

}  // namespace

bool evaluate_short_circuit(const BoolExpr& s, const std::vector<bool>& values, std::vector<TriState>& seen) {
  seen.assign(values.size(), std::nullopt);
  return short_circuit(s, values, seen);
}

bool Decision::fully_exempt() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.const_exempt; });
}

std::size_t DecisionSet::condition_count() const {
  std::size_t n = 0;
  for (const auto& d : decisions) n += d.conditions.size();
  return n;
}

// ---------------------------------------------------------------------------
// Pattern lowering
// ---------------------------------------------------------------------------

namespace {

bool is_rest_child(const Pattern& c) {
  return c.kind == PatternKind::Rest ||
         (c.kind == PatternKind::Identifier && !c.children.empty() && c.children[0].kind == PatternKind::Rest);
}

bool is_dynamic_slice(const Pattern& p) {
  return p.kind == PatternKind::Slice && strip_refs(p.type)->kind == Type::Kind::Slice;
}

// Length test of a slice pattern: (at_least, n).
std::pair<bool, std::size_t> slice_length_test(const Pattern& p) {
  bool has_rest = std::any_of(p.children.begin(), p.children.end(), is_rest_child);
  return {has_rest, p.children.size() - (has_rest ? 1 : 0)};
}

// A dynamic slice pattern whose length test can fail.
bool has_length_constraint(const Pattern& p) {
  auto [at_least, n] = slice_length_test(p);
  return !(at_least && n == 0);
}

class Lowerer {
 public:
  explicit Lowerer(const TypeEnv& env) : env_(env) {}

  std::vector<Condition> conditions;

  std::optional<BoolExpr> lower(const Pattern& p) {
    std::vector<BoolExpr> parts;
    if (auto own = own_condition(p)) parts.push_back(BoolExpr::leaf(*own));
    if (p.kind == PatternKind::Or) {
      BoolExpr alt{BoolExpr::Kind::Or, -1, {}, false};
      for (const auto& c : p.children) {
        auto s = lower(c);
        alt.kids.push_back(s ? std::move(*s) : BoolExpr::constant_true());
      }
      alt.cannot_be_false = p.refutability == Refutability::Irrefutable;
      parts.push_back(std::move(alt));
    } else {
      for (const auto& c : p.children)
        if (auto s = lower(c)) parts.push_back(std::move(*s));
    }
    if (parts.empty()) return std::nullopt;
    if (parts.size() == 1) return std::move(parts[0]);
    return BoolExpr{BoolExpr::Kind::And, -1, std::move(parts), false};
  }

 private:
  const TypeEnv& env_;

  std::optional<int> own_condition(const Pattern& p) {
    bool direct = p.refutability == Refutability::DirectlyRefutable;
    bool extra_len = !direct && is_dynamic_slice(p) && has_length_constraint(p);
    if (!direct && !extra_len) return std::nullopt;
    Condition c;
    c.index = static_cast<int>(conditions.size());
    c.span = p.span;
    c.pattern_node = p.id;
    describe(p, c);
    conditions.push_back(std::move(c));
    return conditions.back().index;
  }

  void describe(const Pattern& p, Condition& c) {
    const TypePtr& t = strip_refs(p.type);
    switch (p.kind) {
      case PatternKind::Literal:
        c.kind = ConditionKind::LiteralEq;
        c.text = "== " + p.literal.str();
        return;
      case PatternKind::Range:
        c.kind = ConditionKind::RangeMembership;
        c.text = "in " + node_label(p);
        return;
      case PatternKind::Slice: {
        auto [at_least, n] = slice_length_test(p);
        c.kind = ConditionKind::SliceLenCheck;
        c.text = std::string(at_least ? "len >= " : "len == ") + std::to_string(n);
        return;
      }
      case PatternKind::Path:
        if (p.meaning == PatternMeaning::Const) {
          c.kind = ConditionKind::ConstEq;
          c.text = "== " + path_str(p.path);
          return;
        }
        [[fallthrough]];
      case PatternKind::Struct:
      case PatternKind::TupleStruct: {
        c.kind = ConditionKind::DiscriminantCheck;
        const auto& info = env_.enum_info(*t);
        const std::string& v = info.variants.at(static_cast<std::size_t>(p.variant)).name;
        c.text = "is " + (info.builtin ? v : info.name + "::" + v);
        return;
      }
      default: throw std::logic_error("no condition for pattern kind " + std::string(to_string(p.kind)));
    }
  }
};

}  // namespace

LoweredPattern lower_pattern(const Pattern& p, const TypeEnv& env) {
  if (!p.refutability) throw std::logic_error("lower_pattern on an unclassified pattern");
  if (*p.refutability == Refutability::Irrefutable) throw NotADecision("irrefutable pattern is not a decision");
  Lowerer l(env);
  auto s = l.lower(p);
  if (!s) throw NotADecision("pattern has no conditions");
  return {std::move(l.conditions), std::move(*s)};
}

// ---------------------------------------------------------------------------
// `?` desugaring
// ---------------------------------------------------------------------------

namespace {

class Desugarer {
 public:
  Desugarer(Program& program, const TypeEnv& env) : program_(program), env_(env) {}

  void run() {
    for (auto& item : program_.items) {
      if (auto* f = std::get_if<FnDef>(&item)) {
        return_type_ = env_.functions.at(f->name).result;
        expr(f->body);
      }
    }
  }

 private:
  Program& program_;
  const TypeEnv& env_;
  TypePtr return_type_;

  int fresh() { return program_.next_id++; }

  void block(std::vector<Stmt>& stmts) {
    for (auto& s : stmts) {
      if (s.kind == Stmt::Kind::Let) {
        if (s.init) expr(*s.init);
        if (s.else_block) expr(*s.else_block);
      } else {
        expr(s.expr);
      }
    }
  }

  void expr(Expr& e) {
    for (auto& k : e.kids) expr(k);
    block(e.stmts);
    for (auto& arm : e.arms) {
      if (arm.guard) expr(*arm.guard);
      expr(arm.body);
    }
    if (e.kind == ExprKind::QuestionMark) e = lower(std::move(e));
  }

  Pattern pattern(PatternKind kind, const SourceSpan& span, TypePtr type) {
    Pattern p;
    p.kind = kind;
    p.span = span;
    p.id = fresh();
    p.type = std::move(type);
    return p;
  }

  Expr make(ExprKind kind, const SourceSpan& span, TypePtr type) {
    Expr x;
    x.kind = kind;
    x.span = span;
    x.id = fresh();
    x.type = std::move(type);
    return x;
  }

  Expr local(const std::string& name, const SourceSpan& span, TypePtr type) {
    Expr x = make(ExprKind::Path, span, std::move(type));
    x.path = {name};
    x.target = ExprTarget::Local;
    return x;
  }

  // `match v { Some(__qm_inner) => __qm_inner, None => return None }` and
  // `match v { Ok(__qm_inner) => __qm_inner, Err(__qm_err) => return Err(__qm_err) }`.
  Expr lower(Expr q) {
    const SourceSpan span = q.span;
    Expr operand = std::move(q.kids[0]);
    TypePtr scrutinee = strip_refs(operand.type);
    bool is_option = scrutinee->name == "Option";
    TypePtr inner_type = scrutinee->args[0];

    Expr m = make(ExprKind::Match, span, q.type);
    m.from_question_mark = true;
    m.kids.push_back(std::move(operand));

    MatchArm success;
    success.span = span;
    success.id = fresh();
    success.pattern = pattern(PatternKind::TupleStruct, span, scrutinee);
    success.pattern.path = {is_option ? "Some" : "Ok"};
    success.pattern.meaning = PatternMeaning::EnumVariant;
    success.pattern.variant = 0;
    Pattern bind = pattern(PatternKind::Identifier, span, inner_type);
    bind.name = "__qm_inner";
    bind.meaning = PatternMeaning::Binding;
    success.pattern.children.push_back(std::move(bind));
    success.body = local("__qm_inner", span, inner_type);

    MatchArm failure;
    failure.span = span;
    failure.id = fresh();
    Expr ret = make(ExprKind::Return, span, types::never());
    if (is_option) {
      failure.pattern = pattern(PatternKind::Path, span, scrutinee);
      failure.pattern.path = {"None"};
      failure.pattern.ambiguous = true;
      Expr none = make(ExprKind::Path, span, return_type_);
      none.path = {"None"};
      none.target = ExprTarget::EnumVariant;
      none.variant = 1;
      ret.kids.push_back(std::move(none));
    } else {
      TypePtr err_type = scrutinee->args[1];
      failure.pattern = pattern(PatternKind::TupleStruct, span, scrutinee);
      failure.pattern.path = {"Err"};
      Pattern err = pattern(PatternKind::Identifier, span, err_type);
      err.name = "__qm_err";
      err.meaning = PatternMeaning::Binding;
      failure.pattern.children.push_back(std::move(err));
      Expr call = make(ExprKind::Call, span, return_type_);
      call.path = {"Err"};
      call.target = ExprTarget::EnumVariant;
      call.variant = 1;
      call.kids.push_back(local("__qm_err", span, err_type));
      ret.kids.push_back(std::move(call));
    }
    failure.pattern.meaning = PatternMeaning::EnumVariant;
    failure.pattern.variant = 1;
    failure.body = std::move(ret);

    m.arms.push_back(std::move(success));
    m.arms.push_back(std::move(failure));
    return m;
  }
};

}  // namespace

TypedProgram desugar_question_mark(TypedProgram program) {
  Desugarer(program.program, *program.env).run();
  return program;
}

// ---------------------------------------------------------------------------
// Pruning and exemption
// ---------------------------------------------------------------------------

std::vector<bool> contextual_prune(const Expr& match_expr, const TypeEnv& env) {
  const TypePtr& scrutinee = match_expr.kids[0].type;
  ValueSpace remaining = value_space_of(scrutinee, env);
  std::vector<bool> out;
  for (const auto& arm : match_expr.arms) {
    ValueSpace d = denotation(arm.pattern, env);
    bool cannot_fail = !arm.guard && remaining.subtract(d).is_empty();
    out.push_back(!cannot_fail);
    if (!arm.guard) remaining = remaining.subtract(d);
  }
  return out;
}

namespace {

Pattern wildcard_like(const Pattern& c) {
  if (is_rest_child(c)) return c;
  Pattern w;
  w.kind = PatternKind::Wildcard;
  w.span = c.span;
  w.type = c.type;
  return w;
}

// The tests evaluated before `target` in the short-circuit plan, as a pattern:
// nodes before `target` in pre-order stay, later nodes become `_`. With
// `keep_target` the test at `target` stays too (its children become `_`).
// Paths through an or-pattern have no such form.
std::optional<Pattern> prefix_up_to(const Pattern& p, int target, bool keep_target, bool& reached) {
  if (reached) return wildcard_like(p);
  if (p.id == target) {
    reached = true;
    if (!keep_target) return wildcard_like(p);
    Pattern out = p;
    for (auto& c : out.children) c = wildcard_like(c);
    return out;
  }
  Pattern out = p;
  for (auto& c : out.children) {
    bool before = reached;
    auto sub = prefix_up_to(c, target, keep_target, reached);
    if (!sub) return std::nullopt;
    if (p.kind == PatternKind::Or && !before && reached) return std::nullopt;
    c = std::move(*sub);
  }
  return out;
}

std::optional<Pattern> prefix_up_to(const Pattern& p, int target, bool keep_target) {
  bool reached = false;
  auto out = prefix_up_to(p, target, keep_target, reached);
  if (!reached) return std::nullopt;
  return out;
}

}  // namespace

std::vector<int> contextually_fixed_conditions(const Pattern& p, const ValueSpace& remaining, const TypeEnv& env) {
  std::vector<int> out;
  LoweredPattern l = lower_pattern(p, env);
  for (const auto& c : l.conditions) {
    auto reach = prefix_up_to(p, c.pattern_node, false);
    auto pass = prefix_up_to(p, c.pattern_node, true);
    if (!reach || !pass) continue;
    try {
      // Values that reach the test (every earlier test passed) but fail it.
      ValueSpace fail = denotation(*reach, env).subtract(denotation(*pass, env));
      if (remaining.intersect(fail).is_empty()) out.push_back(c.pattern_node);
    } catch (const SubtractionUnsupported&) {
    }
  }
  return out;
}

bool is_constant_condition(const Expr& e, const TypeEnv& env) {
  // Statics and let bindings are never constant, even when immutable.
  switch (e.kind) {
    case ExprKind::Literal: return true;
    case ExprKind::Path:
      return e.target == ExprTarget::Const || e.target == ExprTarget::EnumVariant || e.target == ExprTarget::Struct;
    case ExprKind::Unary:
    case ExprKind::Binary:
    case ExprKind::Ref:
    case ExprKind::Deref:
    case ExprKind::Tuple:
      return std::all_of(e.kids.begin(), e.kids.end(), [&](const Expr& k) { return is_constant_condition(k, env); });
    default: return false;
  }
}

namespace {

void walk_exprs(const Expr& e, const std::function<void(const Expr&)>& f);

void walk_stmts(const std::vector<Stmt>& stmts, const std::function<void(const Expr&)>& f) {
  for (const auto& s : stmts) {
    if (s.kind == Stmt::Kind::Let) {
      if (s.init) walk_exprs(*s.init, f);
      if (s.else_block) walk_exprs(*s.else_block, f);
    } else {
      walk_exprs(s.expr, f);
    }
  }
}

void walk_exprs(const Expr& e, const std::function<void(const Expr&)>& f) {
  f(e);
  for (const auto& k : e.kids) walk_exprs(k, f);
  walk_stmts(e.stmts, f);
  for (const auto& arm : e.arms) {
    if (arm.guard) walk_exprs(*arm.guard, f);
    walk_exprs(arm.body, f);
  }
}

}  // namespace

void apply_const_exemption(DecisionSet& ds, const Program& program, const TypeEnv& env) {
  auto visit = [&](const Expr& e) {
    auto it = ds.expr_condition.find(e.id);
    if (it == ds.expr_condition.end()) return;
    Condition& c = ds.decisions[static_cast<std::size_t>(it->second.first)]
                       .conditions[static_cast<std::size_t>(it->second.second)];
    if (c.kind == ConditionKind::BooleanLeaf) c.const_exempt = is_constant_condition(e, env);
  };
  for (const auto& item : program.items)
    if (const auto* f = std::get_if<FnDef>(&item)) walk_exprs(f->body, visit);
}

// ---------------------------------------------------------------------------
// Extraction
// ---------------------------------------------------------------------------

namespace {

class Extractor {
 public:
  Extractor(DecisionSet& ds, const TypeEnv& env, SliceRule rule) : ds_(ds), env_(env), rule_(rule) {}

  void function(FnDef& f) {
    function_ = f.name;
    expr(f.body);
  }

 private:
  DecisionSet& ds_;
  const TypeEnv& env_;
  SliceRule rule_;
  std::string function_;
  int next_condition_ = 0;

  int reserve(DecisionOrigin origin, const SourceSpan& span, int node) {
    Decision d;
    d.id = static_cast<int>(ds_.decisions.size());
    d.origin = origin;
    d.span = span;
    d.node = node;
    d.function = function_;
    ds_.decisions.push_back(std::move(d));
    return ds_.decisions.back().id;
  }

  void finish(int id, std::vector<Condition> conditions, BoolExpr structure) {
    Decision& d = ds_.decisions[static_cast<std::size_t>(id)];
    for (auto& c : conditions) {
      c.id = next_condition_++;
      if (c.pattern_node >= 0) ds_.pattern_condition[c.pattern_node] = {id, c.index};
      if (c.expr_node >= 0) ds_.expr_condition[c.expr_node] = {id, c.index};
    }
    d.conditions = std::move(conditions);
    d.structure = std::move(structure);
  }

  // Pattern decision; returns its id, or -1 for irrefutable patterns.
  // `remaining` holds the values that can reach the pattern.
  int pattern_decision(Pattern& p, DecisionOrigin origin, const ValueSpace& remaining) {
    classify(p, env_, rule_);
    if (!is_refutable(p)) return -1;
    LoweredPattern l = lower_pattern(p, env_);
    std::vector<int> fixed = contextually_fixed_conditions(p, remaining, env_);
    for (auto& c : l.conditions)
      c.context_fixed = std::find(fixed.begin(), fixed.end(), c.pattern_node) != fixed.end();
    int id = reserve(origin, p.span, p.id);
    ds_.pattern_decision[p.id] = id;
    finish(id, std::move(l.conditions), std::move(l.structure));
    return id;
  }

  int pattern_decision(Pattern& p, DecisionOrigin origin) {
    return pattern_decision(p, origin, value_space_of(p.type, env_));
  }

  // Boolean decision rooted at `e`; nested decisions inside its leaves are
  // extracted as separate decisions after it.
  void boolean_decision(Expr& e, DecisionOrigin origin) {
    int id = reserve(origin, e.span, e.id);
    ds_.expr_decision[e.id] = id;
    std::vector<Condition> conditions;
    BoolExpr s = structure(e, conditions);
    finish(id, std::move(conditions), std::move(s));
  }

  static bool is_logical_expr(const Expr& e) {
    if (e.kind == ExprKind::Binary && is_logical(e.binary_op)) return true;
    return e.kind == ExprKind::Unary && e.unary_op == UnaryOp::Not && is_logical_expr(e.kids[0]);
  }

  BoolExpr structure(Expr& e, std::vector<Condition>& conditions) {
    if (e.kind == ExprKind::Binary && is_logical(e.binary_op)) {
      BoolExpr::Kind kind = e.binary_op == BinaryOp::And ? BoolExpr::Kind::And : BoolExpr::Kind::Or;
      BoolExpr out{kind, -1, {}, false};
      for (auto& k : e.kids) {
        BoolExpr s = structure(k, conditions);
        // a && b && c is one n-ary conjunction
        if (s.kind == kind && k.kind == ExprKind::Binary) {
          for (auto& g : s.kids) out.kids.push_back(std::move(g));
        } else {
          out.kids.push_back(std::move(s));
        }
      }
      return out;
    }
    if (e.kind == ExprKind::Unary && e.unary_op == UnaryOp::Not)
      return BoolExpr{BoolExpr::Kind::Not, -1, {structure(e.kids[0], conditions)}, false};

    Condition c;
    c.index = static_cast<int>(conditions.size());
    c.span = e.span;
    c.expr_node = e.id;
    c.text = one_line(print_expr(e));
    conditions.push_back(c);
    std::size_t before = ds_.decisions.size();
    expr(e);
    Condition& leaf = conditions[static_cast<std::size_t>(c.index)];
    if (ds_.decisions.size() > before) {
      leaf.kind = ConditionKind::NestedDecisionResult;
      leaf.nested_decision = static_cast<int>(before);
    }
    return BoolExpr::leaf(c.index);
  }

  void stmts(std::vector<Stmt>& list) {
    for (auto& s : list) {
      if (s.kind == Stmt::Kind::Let) {
        if (s.else_block) pattern_decision(s.pattern, DecisionOrigin::LetElse);
        else classify(s.pattern, env_, rule_);
        if (s.init) expr(*s.init);
        if (s.else_block) expr(*s.else_block);
      } else {
        expr(s.expr);
      }
    }
  }

  // Visits `e` in value position.
  void expr(Expr& e) {
    switch (e.kind) {
      case ExprKind::If:
      case ExprKind::While:
        boolean_decision(e.kids[0], DecisionOrigin::BooleanExpr);
        for (std::size_t k = 1; k < e.kids.size(); ++k) expr(e.kids[k]);
        return;
      case ExprKind::IfLet:
        pattern_decision(e.pattern[0], DecisionOrigin::IfLet);
        for (auto& k : e.kids) expr(k);
        return;
      case ExprKind::Match: {
        expr(e.kids[0]);
        std::vector<bool> keep = contextual_prune(e, env_);
        ValueSpace remaining = value_space_of(e.kids[0].type, env_);
        for (std::size_t k = 0; k < e.arms.size(); ++k) {
          MatchArm& arm = e.arms[k];
          int id = pattern_decision(arm.pattern, e.from_question_mark ? DecisionOrigin::QuestionMark
                                                                      : DecisionOrigin::MatchArm, remaining);
          if (id >= 0) ds_.decisions[static_cast<std::size_t>(id)].pruned = !keep[k];
          if (!arm.guard) remaining = remaining.subtract(denotation(arm.pattern, env_));
          if (arm.guard) boolean_decision(*arm.guard, DecisionOrigin::Guard);
          expr(arm.body);
        }
        return;
      }
      case ExprKind::Binary:
        if (is_logical(e.binary_op)) {
          boolean_decision(e, DecisionOrigin::BooleanExpr);
          return;
        }
        break;
      case ExprKind::Unary:
        if (is_logical_expr(e)) {
          boolean_decision(e, DecisionOrigin::BooleanExpr);
          return;
        }
        break;
      default: break;
    }
    for (auto& k : e.kids) expr(k);
    stmts(e.stmts);
  }
};

}  // namespace

DecisionSet extract_decisions(TypedProgram& program, const ExtractOptions& options) {
  DecisionSet ds;
  ds.slice_rule = options.slice_rule;
  ds.program_hash = program.program.source_hash;
  Extractor x(ds, *program.env, options.slice_rule);
  for (auto& item : program.program.items)
    if (auto* f = std::get_if<FnDef>(&item)) x.function(*f);
  apply_const_exemption(ds, program.program, *program.env);
  return ds;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

nlohmann::json structure_json(const BoolExpr& s) {
  switch (s.kind) {
    case BoolExpr::Kind::True: return true;
    case BoolExpr::Kind::Cond: return s.cond;
    default: break;
  }
  nlohmann::json out = nlohmann::json::array();
  out.push_back(s.kind == BoolExpr::Kind::And ? "and" : s.kind == BoolExpr::Kind::Or ? "or" : "not");
  for (const auto& k : s.kids) out.push_back(structure_json(k));
  return out;
}

nlohmann::json span_json(const SourceSpan& s) {
  return {{"file", s.file}, {"start_line", s.start_line}, {"start_col", s.start_col},
          {"end_line", s.end_line}, {"end_col", s.end_col}};
}

}  // namespace

std::string structure_str(const BoolExpr& s) { return structure_json(s).dump(); }

std::string decisions_json(const DecisionSet& ds) {
  nlohmann::json decisions = nlohmann::json::array();
  for (const auto& d : ds.decisions) {
    nlohmann::json conds = nlohmann::json::array();
    for (const auto& c : d.conditions) {
      nlohmann::json j = {{"id", c.id}, {"index", c.index}, {"kind", to_string(c.kind)},
                          {"text", c.text}, {"span", span_json(c.span)}, {"const_exempt", c.const_exempt},
                          {"context_fixed", c.context_fixed}};
      if (c.nested_decision >= 0) j["nested_decision"] = c.nested_decision;
      conds.push_back(std::move(j));
    }
    decisions.push_back({{"id", d.id},
                         {"function", d.function},
                         {"origin", to_string(d.origin)},
                         {"span", span_json(d.span)},
                         {"pruned", d.pruned},
                         {"conditions", std::move(conds)},
                         {"structure", structure_json(d.structure)}});
  }
  nlohmann::json doc = {{"slice_rule", to_string(ds.slice_rule)}, {"decisions", std::move(decisions)}};
  return doc.dump(2);
}

}  // namespace mcdc
