#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcdc/ast.hpp"
#include "mcdc/refutability.hpp"
#include "mcdc/types.hpp"
#include "mcdc/value_space.hpp"

namespace mcdc {

enum class ConditionKind {
  DiscriminantCheck,
  LiteralEq,
  RangeMembership,
  SliceLenCheck,
  ConstEq,
  BooleanLeaf,
  NestedDecisionResult,
};

enum class DecisionOrigin { MatchArm, IfLet, LetElse, BooleanExpr, Guard, QuestionMark };

const char* to_string(ConditionKind k);
const char* to_string(DecisionOrigin o);

struct Condition {
  int id = -1;     // unique across the program
  int index = 0;   // position inside its decision
  ConditionKind kind = ConditionKind::BooleanLeaf;
  SourceSpan span;
  std::string text;  // human-readable test, e.g. `is Some`, `len == 3`, `x > 0`
  bool const_exempt = false;
  bool context_fixed = false;  // pattern test that cannot fail once the earlier arms were tried
  int pattern_node = -1;     // pattern conditions
  int expr_node = -1;        // boolean leaves
  int nested_decision = -1;  // NestedDecisionResult
};

/// Boolean structure of a decision over condition indices.
struct BoolExpr {
  enum class Kind { Cond, And, Or, Not, True };
  Kind kind = Kind::True;
  int cond = -1;
  std::vector<BoolExpr> kids;
  bool cannot_be_false = false;  // Or nodes of jointly total alternatives

  static BoolExpr leaf(int c) { return BoolExpr{Kind::Cond, c, {}, false}; }
  static BoolExpr constant_true() { return BoolExpr{}; }
};

using TriState = std::optional<bool>;  // nullopt = not evaluated

/// Short-circuit-free evaluation over a complete assignment.
bool evaluate_structure(const BoolExpr& s, const std::vector<bool>& values);

/// Short-circuit evaluation: returns the outcome and resets `seen` to one
/// entry per value, set only for the conditions actually evaluated.
bool evaluate_short_circuit(const BoolExpr& s, const std::vector<bool>& values, std::vector<TriState>& seen);

struct Decision {
  int id = -1;
  SourceSpan span;
  DecisionOrigin origin = DecisionOrigin::BooleanExpr;
  std::string function;
  int node = -1;  // root pattern id or root expression id
  std::vector<Condition> conditions;
  BoolExpr structure;
  bool pruned = false;  // match arm that cannot fail once earlier arms were tried

  bool fully_exempt() const;
};

/// Every decision of a program plus the node-to-decision maps the
/// interpreter uses for recording.
struct DecisionSet {
  std::vector<Decision> decisions;  // index == id
  std::map<int, int> pattern_decision;                 // root pattern id -> decision
  std::map<int, std::pair<int, int>> pattern_condition;  // pattern node id -> (decision, index)
  std::map<int, int> expr_decision;                    // root boolean expression id -> decision
  std::map<int, std::pair<int, int>> expr_condition;   // leaf expression id -> (decision, index)
  SliceRule slice_rule = SliceRule::Verbatim;
  std::uint64_t program_hash = 0;  // source the decisions were extracted from

  std::size_t condition_count() const;
};

class NotADecision : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct LoweredPattern {
  std::vector<Condition> conditions;
  BoolExpr structure;
};

/// Conditions of a classified refutable pattern in depth-first,
/// left-to-right order, and the And/Or structure over them.
LoweredPattern lower_pattern(const Pattern& p, const TypeEnv& env);

/// Replaces every `?` by the equivalent two-arm match. Inserted nodes carry
/// the span of the `?` expression.
TypedProgram desugar_question_mark(TypedProgram program);

/// Per-arm flags: true when the arm is a decision, false when it cannot fail
/// once the earlier arms have been tried.
std::vector<bool> contextual_prune(const Expr& match_expr, const TypeEnv& env);

/// Pattern conditions of `p` whose test cannot fail for any value of
/// `remaining` that reaches them, as pattern node ids.
std::vector<int> contextually_fixed_conditions(const Pattern& p, const ValueSpace& remaining, const TypeEnv& env);

/// Marks boolean leaves built only from literals, consts and operators.
void apply_const_exemption(DecisionSet& ds, const Program& program, const TypeEnv& env);

/// True when `e` is built from literals, consts and operators only.
bool is_constant_condition(const Expr& e, const TypeEnv& env);

struct ExtractOptions {
  SliceRule slice_rule = SliceRule::Verbatim;
};

/// Classifies every pattern of a typed, desugared program and extracts all
/// decisions, hoisting nested ones and applying pruning and const exemption.
DecisionSet extract_decisions(TypedProgram& program, const ExtractOptions& options = {});

/// `--emit=decisions` JSON document.
std::string decisions_json(const DecisionSet& ds);

/// Structure as nested arrays: a condition index, `true`, or
/// `["and"|"or"|"not", ...]`.
std::string structure_str(const BoolExpr& s);

}  // namespace mcdc
