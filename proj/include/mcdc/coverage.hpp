#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcdc/decisions.hpp"
#include "mcdc/runtime.hpp"

namespace mcdc {

class StaleTrace : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TooManyConditions : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest decision for which missing vectors are searched exhaustively.
inline constexpr std::size_t kMaxSuggestConditions = 16;

enum class Criterion { Statement, Decision, Mcdc };

const char* to_string(Criterion c);
std::optional<Criterion> parse_criterion(const std::string& s);

struct CoverageOptions {
  /// Count contextually pruned arm decisions and pattern tests that cannot
  /// fail once the earlier arms were tried.
  bool strict_arms = false;
};

// ---- program inventory -----------------------------------------------------

struct StatementPoint {
  int id = -1;
  SourceSpan span;
  std::string function;
};

enum class ExitKind { Return, QuestionMark, Tail };

const char* to_string(ExitKind k);

struct ExitPoint {
  int id = -1;
  SourceSpan span;
  std::string function;
  ExitKind kind = ExitKind::Tail;
};

struct FunctionPoint {
  std::string name;
  SourceSpan span;
  std::vector<ExitPoint> exits;
};

struct Inventory {
  std::vector<FunctionPoint> functions;
  std::vector<StatementPoint> statements;
};

/// Statements (let and expression statements, block tails, non-block arm
/// bodies) and entry/exit points of every function, in source order.
Inventory program_inventory(const Program& program);

// ---- statement coverage ----------------------------------------------------

struct StatementCoverage {
  std::vector<std::pair<StatementPoint, bool>> statements;
  std::size_t covered = 0;

  bool satisfied() const { return covered == statements.size(); }
};

/// Throws StaleTrace when the trace was recorded for another source text.
StatementCoverage check_statement_coverage(const Trace& trace, const TypedProgram& program);

// ---- decision coverage and MC/DC ------------------------------------------

/// Two visits showing that one condition independently affects the outcome.
struct IndependencePair {
  int condition = -1;            // index inside the decision
  std::uint64_t when_true = 0;   // seq of the visit with the condition true
  std::uint64_t when_false = 0;  // seq of the visit with the condition false
  /// "unique-cause" when every other condition was evaluated in both visits
  /// with equal outcomes, "masking" when a not-evaluated entry was needed.
  std::string rule;

  friend bool operator==(const IndependencePair&, const IndependencePair&) = default;
};

/// The masking rule: the condition is evaluated in both visits with opposite
/// outcomes, the decision outcomes differ, and every other condition is equal
/// wherever both visits evaluated it.
std::optional<std::string> pair_rule(const EvaluationVector& a, const EvaluationVector& b, std::size_t condition);

/// Every pair per condition among distinct visits (duplicates keep the
/// smallest seq). `condition_count` sizes the result.
std::vector<std::vector<IndependencePair>> find_independence_pairs(const std::vector<EvaluationVector>& vectors,
                                                                   std::size_t condition_count);

struct ConditionCoverage {
  int id = -1;
  int index = 0;
  bool const_exempt = false;
  bool context_fixed = false;  // counted only with strict arms
  bool seen_true = false;
  bool seen_false = false;
  std::optional<IndependencePair> pair;  // first pair found

  bool exempt() const { return const_exempt || context_fixed; }
  bool satisfied() const { return exempt() || (seen_true && seen_false && pair.has_value()); }
};

struct DecisionCoverage {
  int id = -1;
  bool excluded = false;  // pruned (outside strict mode) or fully exempt
  bool seen_true = false;
  bool seen_false = false;
  std::size_t visits = 0;
  std::vector<ConditionCoverage> conditions;

  bool dc_satisfied() const { return excluded || (seen_true && seen_false); }
  bool mcdc_satisfied() const;
};

/// One entry per decision, in id order. Throws StaleTrace.
std::vector<DecisionCoverage> check_decision_coverage(const Trace& trace, const DecisionSet& ds,
                                                      const CoverageOptions& options = {});

/// Decision coverage plus per-condition outcomes and independence.
std::vector<DecisionCoverage> check_mcdc(const Trace& trace, const DecisionSet& ds, const CoverageOptions& options = {});

// ---- missing vectors -------------------------------------------------------

enum class ObligationKind { Statement, Entry, Exit, DecisionOutcome, ConditionOutcome, Independence };

const char* to_string(ObligationKind k);

enum class SuggestionStatus { None, Suggested, Infeasible, TooManyConditions };

const char* to_string(SuggestionStatus s);

struct Obligation {
  ObligationKind kind = ObligationKind::DecisionOutcome;
  Criterion criterion = Criterion::Mcdc;  // weakest criterion that requires it
  int decision = -1;
  int condition = -1;  // condition id
  int node = -1;       // statement or exit id
  std::string function;
  SourceSpan span;
  std::string message;
  SuggestionStatus status = SuggestionStatus::None;
  std::vector<std::vector<TriState>> suggestions;  // condition vectors to add
};

/// Condition vectors a decision can produce: every short-circuit evaluation
/// of an assignment in which each jointly total Or keeps a true alternative.
/// Throws TooManyConditions above kMaxSuggestConditions.
std::vector<EvaluationVector> feasible_vectors(const Decision& d);

/// Unmet decision obligations of `d` given its observed visits, each with a
/// smallest set (one or two vectors) of additional visits meeting it, or
/// marked infeasible. Throws TooManyConditions.
std::vector<Obligation> suggest_for_decision(const Decision& d, const std::vector<EvaluationVector>& observed,
                                             const CoverageOptions& options = {});

/// suggest_for_decision over every counted decision of `ds`; decisions above
/// the exhaustive bound yield obligations with status TooManyConditions.
std::vector<Obligation> suggest_missing_vectors(const DecisionSet& ds, const Trace& trace,
                                                const CoverageOptions& options = {});

// ---- report ----------------------------------------------------------------

struct Tally {
  std::size_t covered = 0;
  std::size_t total = 0;
};

struct FunctionCoverage {
  FunctionPoint point;
  bool entered = false;
  std::vector<bool> exits_taken;
};

struct CoverageReport {
  std::string file;
  std::uint64_t program_hash = 0;
  CoverageOptions options;
  SliceRule slice_rule = SliceRule::Verbatim;

  std::vector<FunctionCoverage> functions;
  StatementCoverage statements;
  std::vector<DecisionCoverage> decisions;
  std::vector<Obligation> obligations;

  Tally statement_tally, entry_exit_tally, decision_tally, condition_tally;
  std::size_t exempt_conditions = 0;       // const-exempt
  std::size_t context_fixed_conditions = 0; // exempt because they cannot fail in context

  bool statement_ok = false;  // every statement executed
  bool decision_ok = false;   // entry/exit points plus both outcomes of every counted decision
  bool mcdc_ok = false;       // decision_ok plus condition outcomes and independence

  bool satisfied(Criterion c) const;
};

/// Runs all checks and collects obligations. Throws StaleTrace.
CoverageReport build_report(const TypedProgram& program, const DecisionSet& ds, const Trace& trace,
                            const CoverageOptions& options = {});

std::string report_json(const CoverageReport& report, const DecisionSet& ds, Criterion criterion);

/// Human-readable report; obligations of `criterion` quote their source line.
std::string report_text(const CoverageReport& report, const DecisionSet& ds, Criterion criterion,
                        const std::string& source);

}  // namespace mcdc
