// Command-line front end: `analyze` prints the decision inventory or pattern
// trees of a program, `cover` runs a suite and checks a coverage criterion.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcdc/coverage.hpp"
#include "mcdc/decisions.hpp"
#include "mcdc/parser.hpp"
#include "mcdc/refutability.hpp"
#include "mcdc/runtime.hpp"

namespace {

using namespace mcdc;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kUnsatisfied = 1;
constexpr int kError = 2;

struct RunConfig {
  std::string source;
  std::string suite;
  std::string trace_in;
  std::string trace_out;
  std::string criterion = "mcdc";
  std::string slice_rule = "verbatim";
  std::string emit = "decisions";
  std::string format = "text";
  bool strict_arms = false;
  bool serial = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read `" + path + "`");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write `" + path + "`");
  out << text;
}

struct Loaded {
  std::string text;
  TypedProgram program;
  DecisionSet ds;
};

Loaded load(const RunConfig& cfg) {
  Loaded l;
  l.text = read_file(cfg.source);
  l.program = desugar_question_mark(check_program(parse_program(l.text, cfg.source)));
  ExtractOptions options;
  options.slice_rule = cfg.slice_rule == "corrected" ? SliceRule::Corrected : SliceRule::Verbatim;
  l.ds = extract_decisions(l.program, options);
  return l;
}

// ---- analyze ----------------------------------------------------------------

std::string where(const SourceSpan& s) { return std::to_string(s.start_line) + ":" + std::to_string(s.start_col); }

std::string decisions_text(const DecisionSet& ds, const std::string& file) {
  std::ostringstream os;
  os << file << ": " << ds.decisions.size() << (ds.decisions.size() == 1 ? " decision, " : " decisions, ")
     << ds.condition_count() << (ds.condition_count() == 1 ? " condition" : " conditions") << " (slice rule "
     << to_string(ds.slice_rule) << ")\n";
  for (const auto& d : ds.decisions) {
    os << "d" << d.id << " " << to_string(d.origin) << " in " << d.function << " at " << where(d.span)
       << (d.pruned ? " [pruned]" : "") << "  structure " << structure_str(d.structure) << "\n";
    for (const auto& c : d.conditions) {
      os << "  c" << c.id << " [" << c.index << "] " << to_string(c.kind) << " `" << c.text << "` at " << where(c.span);
      if (c.const_exempt) os << " [const-exempt]";
      if (c.nested_decision >= 0) os << " -> d" << c.nested_decision;
      os << "\n";
    }
  }
  return os.str();
}

struct SitePattern {
  std::string function;
  std::string site;
  const Pattern* pattern;
};

void collect_patterns(const Expr& e, const std::string& fn, std::vector<SitePattern>& out) {
  if (e.kind == ExprKind::IfLet) out.push_back({fn, "if-let", &e.pattern[0]});
  for (const auto& k : e.kids) collect_patterns(k, fn, out);
  for (const auto& s : e.stmts) {
    if (s.kind == Stmt::Kind::Let) {
      out.push_back({fn, s.else_block ? "let-else" : "let", &s.pattern});
      collect_patterns(*s.init, fn, out);
      if (s.else_block) collect_patterns(*s.else_block, fn, out);
    } else {
      collect_patterns(s.expr, fn, out);
    }
  }
  for (const auto& arm : e.arms) {
    out.push_back({fn, e.from_question_mark ? "question-mark arm" : "match arm", &arm.pattern});
    if (arm.guard) collect_patterns(*arm.guard, fn, out);
    collect_patterns(arm.body, fn, out);
  }
}

std::vector<SitePattern> all_patterns(const Program& program) {
  std::vector<SitePattern> out;
  for (const auto& item : program.items)
    if (const auto* f = std::get_if<FnDef>(&item)) collect_patterns(f->body, f->name, out);
  return out;
}

json tree_json(const Pattern& p) {
  json kids = json::array();
  for (const auto& c : p.children) kids.push_back(tree_json(c));
  return {{"label", node_label(p)},
          {"kind", to_string(p.kind)},
          {"refutability", p.refutability ? to_string(*p.refutability) : "Unclassified"},
          {"children", kids}};
}

int cmd_analyze(const RunConfig& cfg) {
  Loaded l = load(cfg);
  bool as_json = cfg.format == "json";
  if (cfg.emit == "decisions") {
    std::cout << (as_json ? decisions_json(l.ds) + "\n" : decisions_text(l.ds, cfg.source));
    return kOk;
  }
  auto patterns = all_patterns(l.program.program);
  if (as_json) {
    json out = json::array();
    for (const auto& sp : patterns) {
      const Pattern& p = *sp.pattern;
      out.push_back({{"function", sp.function},
                     {"site", sp.site},
                     {"line", p.span.start_line},
                     {"col", p.span.start_col},
                     {"refutable", is_refutable(p)},
                     {"tree", tree_json(p)}});
    }
    std::cout << json{{"slice_rule", to_string(l.ds.slice_rule)}, {"patterns", out}}.dump(2) << "\n";
    return kOk;
  }
  for (const auto& sp : patterns) {
    const Pattern& p = *sp.pattern;
    std::cout << sp.function << " " << sp.site << " at " << where(p.span) << " ("
              << (is_refutable(p) ? "refutable" : "irrefutable") << ")\n";
    std::istringstream tree(pattern_tree_text(p));
    for (std::string line; std::getline(tree, line);) std::cout << "  " << line << "\n";
  }
  return kOk;
}

// ---- cover ------------------------------------------------------------------

int cmd_cover(const RunConfig& cfg) {
  Loaded l = load(cfg);
  Criterion criterion = *parse_criterion(cfg.criterion);
  Trace trace;
  std::vector<TestResult> results;
  if (!cfg.trace_in.empty()) {
    trace = Trace::from_jsonl(read_file(cfg.trace_in));
  } else {
    std::vector<TestCase> suite = load_suite(read_file(cfg.suite), l.program);
    SuiteResult run = cfg.serial ? run_suite_serial(l.program, l.ds, suite) : run_suite(l.program, l.ds, suite);
    trace = std::move(run.trace);
    results = std::move(run.results);
  }
  if (!cfg.trace_out.empty()) write_file(cfg.trace_out, trace.to_jsonl());

  CoverageOptions options;
  options.strict_arms = cfg.strict_arms;
  CoverageReport report = build_report(l.program, l.ds, trace, options);

  if (cfg.format == "json") {
    json doc = json::parse(report_json(report, l.ds, criterion));
    json tests = json::array();
    for (const auto& t : results)
      tests.push_back({{"name", t.name}, {"passed", t.passed}, {"value", t.value}, {"output", t.output}, {"failure", t.failure}});
    doc["tests"] = tests;
    std::cout << doc.dump(2) << "\n";
  } else {
    if (!results.empty()) {
      std::size_t failed = 0;
      for (const auto& t : results) {
        failed += !t.passed;
        std::cout << (t.passed ? "  ok    " : "  FAIL  ") << t.name;
        if (!t.passed) std::cout << ": " << t.failure;
        std::cout << "\n";
      }
      std::cout << results.size() << " tests, " << failed << " failed\n\n";
    }
    std::cout << report_text(report, l.ds, criterion, l.text);
  }
  return report.satisfied(criterion) ? kOk : kUnsatisfied;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MC/DC structural coverage for RPS programs"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto slice_rule = CLI::IsMember({"verbatim", "corrected"});
  auto format = CLI::IsMember({"text", "json"});

  CLI::App* analyze = app.add_subcommand("analyze", "Print the decision inventory or pattern trees");
  analyze->add_option("source", cfg.source, "RPS source file")->required();
  analyze->add_option("--emit", cfg.emit, "decisions or pattern-trees")->check(CLI::IsMember({"decisions", "pattern-trees"}));
  analyze->add_option("--slice-rule", cfg.slice_rule, "verbatim or corrected")->check(slice_rule);
  analyze->add_option("--format", cfg.format, "text or json")->check(format);

  CLI::App* cover = app.add_subcommand("cover", "Run a suite and check a coverage criterion");
  cover->add_option("source", cfg.source, "RPS source file")->required();
  auto* suite = cover->add_option("--suite", cfg.suite, "suite manifest (JSON)");
  auto* trace_in = cover->add_option("--trace", cfg.trace_in, "check an existing JSON Lines trace instead of running");
  suite->excludes(trace_in);
  cover->add_option("--criterion", cfg.criterion, "statement, decision or mcdc")
      ->check(CLI::IsMember({"statement", "decision", "mcdc"}));
  cover->add_option("--slice-rule", cfg.slice_rule, "verbatim or corrected")->check(slice_rule);
  cover->add_flag("--strict-arms", cfg.strict_arms, "count contextually pruned match arms");
  cover->add_option("--format", cfg.format, "text or json")->check(format);
  cover->add_option("--trace-out", cfg.trace_out, "write the merged trace as JSON Lines");
  cover->add_flag("--serial", cfg.serial, "run tests one after another");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(cfg);
    if (cfg.suite.empty() && cfg.trace_in.empty()) throw UsageError("cover needs --suite or --trace");
    return cmd_cover(cfg);
  } catch (const Diagnostic& d) {
    std::cerr << d.render() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kError;
}
