#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcdc/decisions.hpp"
#include "mcdc/types.hpp"

namespace mcdc {

/// One visit of a decision: per-condition outcome (nullopt = not evaluated)
/// and the decision outcome.
struct EvaluationVector {
  int decision = -1;
  std::vector<TriState> conds;
  bool outcome = false;
  std::uint64_t seq = 0;

  /// `T`, `F` and `-` per condition, e.g. `TF-`.
  std::string pattern() const;
  friend bool operator==(const EvaluationVector&, const EvaluationVector&) = default;
};

/// Everything one or more runs observed.
struct Trace {
  std::uint64_t program_hash = 0;
  std::vector<EvaluationVector> vectors;
  std::set<int> statements;         // executed statement ids
  std::set<std::string> entries;    // entered functions
  std::set<int> exits;              // exit points taken (return expressions, function bodies)

  /// Multiset union of the vectors and set union of everything else. The
  /// result is canonical, so merging is associative and commutative.
  void merge(const Trace& other);
  /// Sorts vectors by (decision, conditions, outcome) and renumbers `seq`.
  void canonicalize();

  std::string to_jsonl() const;
  static Trace from_jsonl(const std::string& text);

  friend bool operator==(const Trace&, const Trace&) = default;
};

class TraceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TestCase {
  std::string name;
  std::string entry;
  std::vector<std::string> arg_sources;
  std::vector<Value> args;
  std::optional<std::string> expect_source;
  std::optional<Value> expect;
  std::optional<std::string> expect_output;
};

class SuiteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a suite manifest and converts its literal arguments against the
/// entry signatures. Throws SuiteError, ParseError or TypeError.
std::vector<TestCase> load_suite(const std::string& manifest_json, const TypedProgram& program);

struct RunOptions {
  std::uint64_t fuel = 10'000'000;  // evaluation steps before "out of fuel"
  int max_depth = 400;              // nested calls before "stack overflow"
};

/// Fuel from `MCDC_FUEL`, or the default.
RunOptions default_run_options();

struct EvalResult {
  std::optional<Value> value;
  std::optional<RuntimeError> error;
  std::string output;
  Trace trace;
};

/// Runs `entry` with `args`; the trace records every decision visit,
/// statement, entry and exit, including those before a runtime error.
EvalResult evaluate(const TypedProgram& program, const DecisionSet& ds, const std::string& entry,
                    const std::vector<Value>& args, const RunOptions& options = default_run_options());

EvalResult evaluate(const TypedProgram& program, const DecisionSet& ds, const TestCase& test,
                    const RunOptions& options = default_run_options());

struct TestResult {
  std::string name;
  bool passed = false;
  std::string value;    // rendered result, empty on error
  std::string output;
  std::string failure;  // why the test failed
};

struct SuiteResult {
  std::vector<TestResult> results;
  Trace trace;

  std::size_t failures() const;
};

/// Runs every test on its own interpreter in parallel and merges the traces.
SuiteResult run_suite(const TypedProgram& program, const DecisionSet& ds, const std::vector<TestCase>& suite,
                      const RunOptions& options = default_run_options());

/// Sequential reference for run_suite; the result is identical.
SuiteResult run_suite_serial(const TypedProgram& program, const DecisionSet& ds, const std::vector<TestCase>& suite,
                             const RunOptions& options = default_run_options());

/// The interpreter's pattern matcher on a typed pattern, without recording.
bool matches(const Pattern& p, const Value& v, const TypeEnv& env);

}  // namespace mcdc
