#include "mcdc/coverage.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "json.hpp"

namespace mcdc {

const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::Statement: return "statement";
    case Criterion::Decision: return "decision";
    case Criterion::Mcdc: return "mcdc";
  }
  return "?";
}

std::optional<Criterion> parse_criterion(const std::string& s) {
  if (s == "statement") return Criterion::Statement;
  if (s == "decision") return Criterion::Decision;
  if (s == "mcdc") return Criterion::Mcdc;
  return std::nullopt;
}

const char* to_string(ExitKind k) {
  switch (k) {
    case ExitKind::Return: return "return";
    case ExitKind::QuestionMark: return "question-mark";
    case ExitKind::Tail: return "tail";
  }
  return "?";
}

const char* to_string(ObligationKind k) {
  switch (k) {
    case ObligationKind::Statement: return "statement";
    case ObligationKind::Entry: return "entry";
    case ObligationKind::Exit: return "exit";
    case ObligationKind::DecisionOutcome: return "decision-outcome";
    case ObligationKind::ConditionOutcome: return "condition-outcome";
    case ObligationKind::Independence: return "independence";
  }
  return "?";
}

const char* to_string(SuggestionStatus s) {
  switch (s) {
    case SuggestionStatus::None: return "none";
    case SuggestionStatus::Suggested: return "suggested";
    case SuggestionStatus::Infeasible: return "infeasible";
    case SuggestionStatus::TooManyConditions: return "too-many-conditions";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Inventory
// ---------------------------------------------------------------------------

namespace {

class InventoryWalker {
 public:
  explicit InventoryWalker(Inventory& out) : out_(out) {}

  void function(const FnDef& f) {
    out_.functions.push_back(FunctionPoint{f.name, f.span, {}});
    current_ = &out_.functions.back();
    expr(f.body, false);
    if (f.body.type && f.body.type->kind != Type::Kind::Never)
      current_->exits.push_back(ExitPoint{f.body.id, f.body.span, f.name, ExitKind::Tail});
  }

 private:
  Inventory& out_;
  FunctionPoint* current_ = nullptr;

  void statement(int id, const SourceSpan& span) { out_.statements.push_back(StatementPoint{id, span, current_->name}); }

  void expr(const Expr& e, bool from_question_mark) {
    switch (e.kind) {
      case ExprKind::Return:
        current_->exits.push_back(ExitPoint{e.id, e.span, current_->name,
                                            from_question_mark ? ExitKind::QuestionMark : ExitKind::Return});
        for (const auto& k : e.kids) expr(k, false);
        return;
      case ExprKind::Block:
        for (const auto& s : e.stmts) {
          statement(s.id, s.span);
          if (s.kind == Stmt::Kind::Let) {
            expr(*s.init, false);
            if (s.else_block) expr(*s.else_block, false);
          } else {
            expr(s.expr, false);
          }
        }
        if (e.has_tail) {
          statement(e.kids[0].id, e.kids[0].span);
          expr(e.kids[0], false);
        }
        return;
      case ExprKind::Match:
        expr(e.kids[0], false);
        for (const auto& arm : e.arms) {
          if (arm.guard) expr(*arm.guard, false);
          if (arm.body.kind != ExprKind::Block) statement(arm.body.id, arm.body.span);
          expr(arm.body, e.from_question_mark);
        }
        return;
      default:
        for (const auto& k : e.kids) expr(k, false);
        return;
    }
  }
};

void require_fresh(std::uint64_t trace_hash, std::uint64_t program_hash) {
  if (trace_hash != program_hash)
    throw StaleTrace("trace was recorded for a different revision of the program");
}

}  // namespace

Inventory program_inventory(const Program& program) {
  Inventory inv;
  InventoryWalker w(inv);
  for (const auto& item : program.items)
    if (const auto* f = std::get_if<FnDef>(&item)) w.function(*f);
  return inv;
}

StatementCoverage check_statement_coverage(const Trace& trace, const TypedProgram& program) {
  require_fresh(trace.program_hash, program.program.source_hash);
  StatementCoverage out;
  for (auto& s : program_inventory(program.program).statements) {
    bool hit = trace.statements.count(s.id) > 0;
    out.covered += hit;
    out.statements.emplace_back(std::move(s), hit);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Independence pairs
// ---------------------------------------------------------------------------

std::optional<std::string> pair_rule(const EvaluationVector& a, const EvaluationVector& b, std::size_t condition) {
  if (a.outcome == b.outcome) return std::nullopt;
  const TriState& x = a.conds[condition];
  const TriState& y = b.conds[condition];
  if (!x || !y || *x == *y) return std::nullopt;
  bool masked = false;
  for (std::size_t k = 0; k < a.conds.size(); ++k) {
    if (k == condition) continue;
    if (a.conds[k] && b.conds[k]) {
      if (*a.conds[k] != *b.conds[k]) return std::nullopt;
    } else {
      masked = true;
    }
  }
  return masked ? "masking" : "unique-cause";
}

namespace {

// Distinct visits in canonical order, each keeping its smallest seq.
std::vector<EvaluationVector> distinct(std::vector<EvaluationVector> vs) {
  std::sort(vs.begin(), vs.end(), [](const EvaluationVector& a, const EvaluationVector& b) { return a.seq < b.seq; });
  std::vector<EvaluationVector> out;
  for (auto& v : vs) {
    bool seen = std::any_of(out.begin(), out.end(), [&](const EvaluationVector& o) {
      return o.conds == v.conds && o.outcome == v.outcome;
    });
    if (!seen) out.push_back(std::move(v));
  }
  return out;
}

IndependencePair make_pair(const EvaluationVector& a, const EvaluationVector& b, std::size_t c, std::string rule) {
  const EvaluationVector& t = *a.conds[c] ? a : b;
  const EvaluationVector& f = *a.conds[c] ? b : a;
  return IndependencePair{static_cast<int>(c), t.seq, f.seq, std::move(rule)};
}

}  // namespace

std::vector<std::vector<IndependencePair>> find_independence_pairs(const std::vector<EvaluationVector>& vectors,
                                                                   std::size_t condition_count) {
  std::vector<std::vector<IndependencePair>> out(condition_count);
  std::vector<EvaluationVector> vs = distinct(vectors);
  for (std::size_t c = 0; c < condition_count; ++c)
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j)
        if (auto rule = pair_rule(vs[i], vs[j], c)) out[c].push_back(make_pair(vs[i], vs[j], c, *rule));
  return out;
}

// ---------------------------------------------------------------------------
// Decision coverage and MC/DC
// ---------------------------------------------------------------------------

bool DecisionCoverage::mcdc_satisfied() const {
  if (excluded) return true;
  return seen_true && seen_false &&
         std::all_of(conditions.begin(), conditions.end(), [](const ConditionCoverage& c) { return c.satisfied(); });
}

namespace {

std::map<int, std::vector<EvaluationVector>> by_decision(const Trace& trace) {
  std::map<int, std::vector<EvaluationVector>> out;
  for (const auto& v : trace.vectors) out[v.decision].push_back(v);
  return out;
}

bool is_excluded(const Decision& d, const CoverageOptions& options) {
  return (d.pruned && !options.strict_arms) || d.fully_exempt();
}

DecisionCoverage analyze(const Decision& d, const std::vector<EvaluationVector>& vs, const CoverageOptions& options,
                         bool pairs) {
  DecisionCoverage out;
  out.id = d.id;
  out.excluded = is_excluded(d, options);
  out.visits = vs.size();
  for (const auto& c : d.conditions) {
    ConditionCoverage cc;
    cc.id = c.id;
    cc.index = c.index;
    cc.const_exempt = c.const_exempt;
    cc.context_fixed = c.context_fixed && !options.strict_arms;
    out.conditions.push_back(cc);
  }
  for (const auto& v : vs) {
    (v.outcome ? out.seen_true : out.seen_false) = true;
    for (std::size_t k = 0; k < v.conds.size() && k < out.conditions.size(); ++k)
      if (v.conds[k]) (*v.conds[k] ? out.conditions[k].seen_true : out.conditions[k].seen_false) = true;
  }
  if (pairs) {
    auto found = find_independence_pairs(vs, d.conditions.size());
    for (std::size_t k = 0; k < found.size(); ++k)
      if (!found[k].empty()) out.conditions[k].pair = found[k].front();
  }
  return out;
}

std::vector<DecisionCoverage> check(const Trace& trace, const DecisionSet& ds, const CoverageOptions& options,
                                    bool pairs) {
  require_fresh(trace.program_hash, ds.program_hash);
  auto grouped = by_decision(trace);
  std::vector<DecisionCoverage> out;
  for (const auto& d : ds.decisions) {
    auto it = grouped.find(d.id);
    static const std::vector<EvaluationVector> none;
    out.push_back(analyze(d, it == grouped.end() ? none : it->second, options, pairs));
  }
  return out;
}

}  // namespace

std::vector<DecisionCoverage> check_decision_coverage(const Trace& trace, const DecisionSet& ds,
                                                      const CoverageOptions& options) {
  return check(trace, ds, options, false);
}

std::vector<DecisionCoverage> check_mcdc(const Trace& trace, const DecisionSet& ds, const CoverageOptions& options) {
  return check(trace, ds, options, true);
}

// ---------------------------------------------------------------------------
// Missing vectors
// ---------------------------------------------------------------------------

namespace {

// False when some jointly total Or has every alternative false.
bool respects_totality(const BoolExpr& s, const std::vector<bool>& values) {
  if (s.kind == BoolExpr::Kind::Or && s.cannot_be_false && !evaluate_structure(s, values)) return false;
  return std::all_of(s.kids.begin(), s.kids.end(), [&](const BoolExpr& k) { return respects_totality(k, values); });
}

std::string vector_text(const std::vector<TriState>& conds) {
  std::string out;
  for (const auto& c : conds) out += !c ? '-' : *c ? 'T' : 'F';
  return out;
}

}  // namespace

std::vector<EvaluationVector> feasible_vectors(const Decision& d) {
  std::size_t n = d.conditions.size();
  if (n > kMaxSuggestConditions)
    throw TooManyConditions("decision " + std::to_string(d.id) + " has " + std::to_string(n) +
                            " conditions; exhaustive search is limited to " + std::to_string(kMaxSuggestConditions));
  std::vector<EvaluationVector> out;
  std::vector<bool> values(n);
  for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << n); ++bits) {
    for (std::size_t k = 0; k < n; ++k) values[k] = (bits >> k) & 1U;
    if (!respects_totality(d.structure, values)) continue;
    EvaluationVector v;
    v.decision = d.id;
    v.conds.assign(n, std::nullopt);
    v.outcome = evaluate_short_circuit(d.structure, values, v.conds);
    out.push_back(std::move(v));
  }
  Trace t;
  t.vectors = std::move(out);
  t.canonicalize();
  auto last = std::unique(t.vectors.begin(), t.vectors.end(), [](const EvaluationVector& a, const EvaluationVector& b) {
    return a.conds == b.conds && a.outcome == b.outcome;
  });
  t.vectors.erase(last, t.vectors.end());
  // Prefer vectors that evaluate the most conditions: they are the easiest to
  // recognise in a test and the most useful for later pairs.
  std::stable_sort(t.vectors.begin(), t.vectors.end(), [](const EvaluationVector& a, const EvaluationVector& b) {
    auto evaluated = [](const EvaluationVector& v) {
      return std::count_if(v.conds.begin(), v.conds.end(), [](const TriState& c) { return c.has_value(); });
    };
    return evaluated(a) > evaluated(b);
  });
  return t.vectors;
}

std::vector<Obligation> suggest_for_decision(const Decision& d, const std::vector<EvaluationVector>& observed,
                                             const CoverageOptions& options) {
  std::vector<EvaluationVector> candidates = feasible_vectors(d);
  std::vector<EvaluationVector> seen = distinct(observed);
  DecisionCoverage cov = analyze(d, observed, options, true);

  // A test that cannot fail in context is true whenever it runs, and a
  // constant condition keeps the value(s) it was observed with.
  std::erase_if(candidates, [&](const EvaluationVector& v) {
    for (const auto& c : d.conditions) {
      auto k = static_cast<std::size_t>(c.index);
      if (!v.conds[k]) continue;
      if (c.context_fixed && !*v.conds[k]) return true;
      const ConditionCoverage& cc = cov.conditions[k];
      if (c.const_exempt && (cc.seen_true || cc.seen_false) && (*v.conds[k] ? !cc.seen_true : !cc.seen_false))
        return true;
    }
    return false;
  });

  std::vector<Obligation> out;
  auto base = [&](ObligationKind kind, int condition, const SourceSpan& span, std::string message) {
    Obligation o;
    o.kind = kind;
    o.criterion = kind == ObligationKind::DecisionOutcome ? Criterion::Decision : Criterion::Mcdc;
    o.decision = d.id;
    o.condition = condition;
    o.function = d.function;
    o.span = span;
    o.message = std::move(message);
    return o;
  };
  auto settle = [](Obligation& o, std::vector<std::vector<TriState>> found) {
    o.status = found.empty() ? SuggestionStatus::Infeasible : SuggestionStatus::Suggested;
    o.suggestions = std::move(found);
  };
  auto first = [&](auto pred) -> std::vector<std::vector<TriState>> {
    for (const auto& v : candidates)
      if (pred(v)) return {v.conds};
    return {};
  };

  for (bool want : {true, false}) {
    if (want ? cov.seen_true : cov.seen_false) continue;
    Obligation o = base(ObligationKind::DecisionOutcome, -1, d.span,
                        "decision " + std::to_string(d.id) + " needs outcome " + (want ? "true" : "false"));
    settle(o, first([&](const EvaluationVector& v) { return v.outcome == want; }));
    out.push_back(std::move(o));
  }

  for (const auto& c : d.conditions) {
    auto k = static_cast<std::size_t>(c.index);
    const ConditionCoverage& cc = cov.conditions[k];
    if (cc.exempt()) continue;
    std::string name = "condition " + std::to_string(c.id) + " (`" + c.text + "`)";
    for (bool want : {true, false}) {
      if (want ? cc.seen_true : cc.seen_false) continue;
      Obligation o = base(ObligationKind::ConditionOutcome, c.id, c.span, name + " needs to be " + (want ? "true" : "false"));
      settle(o, first([&](const EvaluationVector& v) { return v.conds[k] && *v.conds[k] == want; }));
      out.push_back(std::move(o));
    }
    if (cc.pair) continue;
    Obligation o = base(ObligationKind::Independence, c.id, c.span, name + " has not been shown to independently affect the outcome");
    std::vector<std::vector<TriState>> found = first([&](const EvaluationVector& v) {
      return std::any_of(seen.begin(), seen.end(), [&](const EvaluationVector& s) { return pair_rule(v, s, k).has_value(); });
    });
    for (std::size_t i = 0; found.empty() && i < candidates.size(); ++i)
      for (std::size_t j = i + 1; found.empty() && j < candidates.size(); ++j)
        if (pair_rule(candidates[i], candidates[j], k)) found = {candidates[i].conds, candidates[j].conds};
    settle(o, std::move(found));
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<Obligation> suggest_missing_vectors(const DecisionSet& ds, const Trace& trace, const CoverageOptions& options) {
  require_fresh(trace.program_hash, ds.program_hash);
  auto grouped = by_decision(trace);
  std::vector<Obligation> out;
  for (const auto& d : ds.decisions) {
    if (is_excluded(d, options)) continue;
    const auto& vs = grouped[d.id];
    try {
      auto obligations = suggest_for_decision(d, vs, options);
      out.insert(out.end(), obligations.begin(), obligations.end());
    } catch (const TooManyConditions&) {
      // Same obligations, without a search.
      DecisionCoverage cov = analyze(d, vs, options, true);
      auto add = [&](ObligationKind kind, Criterion crit, int cond, const SourceSpan& span, std::string msg) {
        Obligation o;
        o.kind = kind;
        o.criterion = crit;
        o.decision = d.id;
        o.condition = cond;
        o.function = d.function;
        o.span = span;
        o.message = std::move(msg);
        o.status = SuggestionStatus::TooManyConditions;
        out.push_back(std::move(o));
      };
      for (bool want : {true, false})
        if (!(want ? cov.seen_true : cov.seen_false))
          add(ObligationKind::DecisionOutcome, Criterion::Decision, -1, d.span,
              "decision " + std::to_string(d.id) + " needs outcome " + (want ? "true" : "false"));
      for (const auto& c : d.conditions) {
        const ConditionCoverage& cc = cov.conditions[static_cast<std::size_t>(c.index)];
        if (cc.satisfied()) continue;
        std::string name = "condition " + std::to_string(c.id) + " (`" + c.text + "`)";
        for (bool want : {true, false})
          if (!(want ? cc.seen_true : cc.seen_false))
            add(ObligationKind::ConditionOutcome, Criterion::Mcdc, c.id, c.span, name + " needs to be " + (want ? "true" : "false"));
        if (!cc.pair)
          add(ObligationKind::Independence, Criterion::Mcdc, c.id, c.span,
              name + " has not been shown to independently affect the outcome");
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

bool CoverageReport::satisfied(Criterion c) const {
  switch (c) {
    case Criterion::Statement: return statement_ok;
    case Criterion::Decision: return decision_ok;
    case Criterion::Mcdc: return mcdc_ok;
  }
  return false;
}

CoverageReport build_report(const TypedProgram& program, const DecisionSet& ds, const Trace& trace,
                            const CoverageOptions& options) {
  require_fresh(trace.program_hash, program.program.source_hash);
  require_fresh(trace.program_hash, ds.program_hash);
  CoverageReport r;
  r.file = program.program.file;
  r.program_hash = program.program.source_hash;
  r.options = options;
  r.slice_rule = ds.slice_rule;

  r.statements = check_statement_coverage(trace, program);
  r.statement_tally = {r.statements.covered, r.statements.statements.size()};
  for (const auto& [s, hit] : r.statements.statements) {
    if (hit) continue;
    Obligation o;
    o.kind = ObligationKind::Statement;
    o.criterion = Criterion::Statement;
    o.node = s.id;
    o.function = s.function;
    o.span = s.span;
    o.message = "statement not executed";
    r.obligations.push_back(std::move(o));
  }

  for (auto& f : program_inventory(program.program).functions) {
    FunctionCoverage fc;
    fc.entered = trace.entries.count(f.name) > 0;
    r.entry_exit_tally.total += 1 + f.exits.size();
    r.entry_exit_tally.covered += fc.entered;
    if (!fc.entered) {
      Obligation o;
      o.kind = ObligationKind::Entry;
      o.criterion = Criterion::Decision;
      o.function = f.name;
      o.span = f.span;
      o.message = "function `" + f.name + "` never entered";
      r.obligations.push_back(std::move(o));
    }
    for (const auto& x : f.exits) {
      bool taken = trace.exits.count(x.id) > 0;
      fc.exits_taken.push_back(taken);
      r.entry_exit_tally.covered += taken;
      if (!taken) {
        Obligation o;
        o.kind = ObligationKind::Exit;
        o.criterion = Criterion::Decision;
        o.node = x.id;
        o.function = f.name;
        o.span = x.span;
        o.message = std::string(to_string(x.kind)) + " exit of `" + f.name + "` never taken";
        r.obligations.push_back(std::move(o));
      }
    }
    fc.point = std::move(f);
    r.functions.push_back(std::move(fc));
  }

  r.decisions = check_mcdc(trace, ds, options);
  for (const auto& dc : r.decisions) {
    for (const auto& c : dc.conditions) {
      r.exempt_conditions += c.const_exempt && !dc.excluded;
      r.context_fixed_conditions += !c.const_exempt && c.context_fixed && !dc.excluded;
    }
    if (dc.excluded) continue;
    ++r.decision_tally.total;
    r.decision_tally.covered += dc.seen_true && dc.seen_false;
    for (const auto& c : dc.conditions) {
      if (c.exempt()) continue;
      ++r.condition_tally.total;
      r.condition_tally.covered += c.satisfied();
    }
  }
  auto decision_obligations = suggest_missing_vectors(ds, trace, options);
  r.obligations.insert(r.obligations.end(), decision_obligations.begin(), decision_obligations.end());

  bool entry_exit = r.entry_exit_tally.covered == r.entry_exit_tally.total;
  r.statement_ok = r.statements.satisfied();
  r.decision_ok = entry_exit && r.decision_tally.covered == r.decision_tally.total;
  r.mcdc_ok = r.decision_ok && r.condition_tally.covered == r.condition_tally.total;
  return r;
}

namespace {

using nlohmann::json;

json span_json(const SourceSpan& s) {
  return {{"file", s.file}, {"start_line", s.start_line}, {"start_col", s.start_col},
          {"end_line", s.end_line}, {"end_col", s.end_col}};
}

json tally_json(const Tally& t) { return {{"covered", t.covered}, {"total", t.total}}; }

json tristate_list(const std::vector<TriState>& v) {
  json out = json::array();
  for (const auto& c : v) out.push_back(!c ? "-" : *c ? "T" : "F");
  return out;
}

bool relevant(Criterion obligation, Criterion requested) {
  return static_cast<int>(obligation) <= static_cast<int>(requested);
}

std::string percent(const Tally& t) {
  if (t.total == 0) return "100.0%";
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << 100.0 * static_cast<double>(t.covered) / static_cast<double>(t.total) << "%";
  return os.str();
}

std::string source_line(const std::string& source, int line) {
  std::istringstream in(source);
  std::string text;
  for (int k = 1; std::getline(in, text); ++k)
    if (k == line) return text;
  return "";
}

}  // namespace

std::string report_json(const CoverageReport& r, const DecisionSet& ds, Criterion criterion) {
  json functions = json::array();
  for (const auto& f : r.functions) {
    json exits = json::array();
    for (std::size_t k = 0; k < f.point.exits.size(); ++k) {
      const auto& x = f.point.exits[k];
      exits.push_back({{"id", x.id}, {"kind", to_string(x.kind)}, {"span", span_json(x.span)}, {"taken", f.exits_taken[k]}});
    }
    functions.push_back({{"name", f.point.name}, {"span", span_json(f.point.span)}, {"entered", f.entered}, {"exits", exits}});
  }
  json statements = json::array();
  for (const auto& [s, hit] : r.statements.statements)
    statements.push_back({{"id", s.id}, {"function", s.function}, {"span", span_json(s.span)}, {"covered", hit}});
  json decisions = json::array();
  for (const auto& dc : r.decisions) {
    const Decision& d = ds.decisions[static_cast<std::size_t>(dc.id)];
    json conds = json::array();
    for (const auto& cc : dc.conditions) {
      const Condition& c = d.conditions[static_cast<std::size_t>(cc.index)];
      json pair = nullptr;
      if (cc.pair) pair = {{"when_true", cc.pair->when_true}, {"when_false", cc.pair->when_false}, {"rule", cc.pair->rule}};
      conds.push_back({{"id", c.id},
                       {"index", c.index},
                       {"kind", to_string(c.kind)},
                       {"text", c.text},
                       {"span", span_json(c.span)},
                       {"const_exempt", c.const_exempt},
                       {"context_fixed", cc.context_fixed},
                       {"outcomes", {{"true", cc.seen_true}, {"false", cc.seen_false}}},
                       {"independence_pair", pair},
                       {"satisfied", cc.satisfied()}});
    }
    decisions.push_back({{"id", d.id},
                         {"function", d.function},
                         {"origin", to_string(d.origin)},
                         {"span", span_json(d.span)},
                         {"pruned", d.pruned},
                         {"excluded", dc.excluded},
                         {"visits", dc.visits},
                         {"outcomes", {{"true", dc.seen_true}, {"false", dc.seen_false}}},
                         {"structure", json::parse(structure_str(d.structure))},
                         {"decision_covered", dc.dc_satisfied()},
                         {"mcdc_covered", dc.mcdc_satisfied()},
                         {"conditions", conds}});
  }
  json obligations = json::array();
  for (const auto& o : r.obligations) {
    json suggestions = json::array();
    for (const auto& v : o.suggestions) suggestions.push_back(tristate_list(v));
    json j = {{"kind", to_string(o.kind)},
              {"criterion", to_string(o.criterion)},
              {"function", o.function},
              {"span", span_json(o.span)},
              {"message", o.message},
              {"status", to_string(o.status)},
              {"suggestions", suggestions}};
    j["decision"] = o.decision >= 0 ? json(o.decision) : json(nullptr);
    j["condition"] = o.condition >= 0 ? json(o.condition) : json(nullptr);
    j["node"] = o.node >= 0 ? json(o.node) : json(nullptr);
    obligations.push_back(std::move(j));
  }
  std::ostringstream hash;
  hash << std::hex;
  hash.width(16);
  hash.fill('0');
  hash << r.program_hash;
  json doc = {{"file", r.file},
              {"program_hash", hash.str()},
              {"criterion", to_string(criterion)},
              {"satisfied", r.satisfied(criterion)},
              {"strict_arms", r.options.strict_arms},
              {"slice_rule", to_string(r.slice_rule)},
              {"verdicts", {{"statement", r.statement_ok}, {"decision", r.decision_ok}, {"mcdc", r.mcdc_ok}}},
              {"summary",
               {{"statements", tally_json(r.statement_tally)},
                {"entry_exit", tally_json(r.entry_exit_tally)},
                {"decisions", tally_json(r.decision_tally)},
                {"conditions", tally_json(r.condition_tally)},
                {"exempt_conditions", r.exempt_conditions},
                {"context_fixed_conditions", r.context_fixed_conditions}}},
              {"functions", functions},
              {"statements", statements},
              {"decisions", decisions},
              {"obligations", obligations}};
  return doc.dump(2) + "\n";
}

std::string report_text(const CoverageReport& r, const DecisionSet& ds, Criterion criterion, const std::string& source) {
  std::ostringstream os;
  auto verdict = [](bool ok) { return ok ? "satisfied" : "NOT satisfied"; };
  os << "coverage of " << r.file << " (criterion " << to_string(criterion) << ", slice rule "
     << to_string(r.slice_rule) << (r.options.strict_arms ? ", strict arms" : "") << ")\n";
  os << "  statements  " << r.statement_tally.covered << "/" << r.statement_tally.total << "  "
     << percent(r.statement_tally) << "\n";
  os << "  entry/exit  " << r.entry_exit_tally.covered << "/" << r.entry_exit_tally.total << "  "
     << percent(r.entry_exit_tally) << "\n";
  os << "  decisions   " << r.decision_tally.covered << "/" << r.decision_tally.total << "  "
     << percent(r.decision_tally) << "\n";
  os << "  conditions  " << r.condition_tally.covered << "/" << r.condition_tally.total << "  "
     << percent(r.condition_tally) << " (" << r.exempt_conditions << " const-exempt, " << r.context_fixed_conditions
     << " cannot fail in context)\n";
  os << "  statement " << verdict(r.statement_ok) << ", decision " << verdict(r.decision_ok) << ", mcdc "
     << verdict(r.mcdc_ok) << "\n";

  if (!r.decisions.empty()) os << "\ndecisions\n";
  for (const auto& dc : r.decisions) {
    const Decision& d = ds.decisions[static_cast<std::size_t>(dc.id)];
    os << "  d" << d.id << " " << to_string(d.origin) << " in " << d.function << " at " << d.span.start_line << ":"
       << d.span.start_col << "  outcomes " << (dc.seen_true ? "T" : "") << (dc.seen_false ? "F" : "")
       << (!dc.seen_true && !dc.seen_false ? "none" : "");
    if (d.pruned) os << (dc.excluded ? "  [pruned, not counted]" : "  [pruned, counted]");
    else if (dc.excluded) os << "  [const-exempt]";
    os << "\n";
    for (const auto& cc : dc.conditions) {
      const Condition& c = d.conditions[static_cast<std::size_t>(cc.index)];
      os << "    c" << c.id << " `" << c.text << "`  " << (cc.seen_true ? "T" : "-") << (cc.seen_false ? "F" : "-");
      if (cc.const_exempt) os << "  const-exempt";
      else if (cc.context_fixed) os << "  cannot fail here";
      else if (cc.pair) os << "  pair #" << cc.pair->when_true << "/#" << cc.pair->when_false << " (" << cc.pair->rule << ")";
      else os << "  no independence pair";
      os << "\n";
    }
  }

  std::size_t shown = 0;
  for (const auto& o : r.obligations) {
    if (!relevant(o.criterion, criterion)) continue;
    if (shown++ == 0) os << "\nobligations\n";
    os << "  " << o.span.file << ":" << o.span.start_line << ":" << o.span.start_col << ": " << o.message << "\n";
    std::string line = source_line(source, o.span.start_line);
    if (!line.empty()) os << "    " << o.span.start_line << " | " << line << "\n";
    switch (o.status) {
      case SuggestionStatus::Suggested: {
        os << "    add a test producing";
        for (std::size_t k = 0; k < o.suggestions.size(); ++k) os << (k ? " and " : " ") << vector_text(o.suggestions[k]);
        os << "\n";
        break;
      }
      case SuggestionStatus::Infeasible: os << "    infeasible: no evaluation of this decision can meet it\n"; break;
      case SuggestionStatus::TooManyConditions: os << "    too many conditions to search for a vector\n"; break;
      case SuggestionStatus::None: break;
    }
  }
  return os.str();
}

}  // namespace mcdc
