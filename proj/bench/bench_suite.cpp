// Parallel against serial suite execution on the corpus and on the
// question-mark twins fixture. The range argument repeats the suite so the
// per-test work outweighs scheduling overhead.
#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "mcdc/decisions.hpp"
#include "mcdc/parser.hpp"
#include "mcdc/runtime.hpp"
#include "mcdc/types.hpp"

using namespace mcdc;

namespace {

struct Workload {
  TypedProgram program;
  DecisionSet ds;
  std::vector<TestCase> suite;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Workload load(const std::string& program_path, const std::string& suite_path) {
  Workload w;
  w.program = desugar_question_mark(check_program(parse_program(read_text(program_path), program_path)));
  w.ds = extract_decisions(w.program, ExtractOptions{});
  w.suite = load_suite(read_text(suite_path), w.program);
  return w;
}

std::vector<Workload> corpus_workloads() {
  std::vector<Workload> out;
  for (const char* name : {"enum_match", "complex_pattern", "first_value", "nested_if", "match_in_if", "question_mark"}) {
    std::string base = std::string(MCDC_CORPUS_DIR) + "/" + name;
    out.push_back(load(base + ".rps", base + ".suite.json"));
  }
  return out;
}

const std::vector<Workload>& corpus() {
  static const std::vector<Workload> w = corpus_workloads();
  return w;
}

const Workload& twins() {
  static const Workload w = load(std::string(MCDC_FIXTURE_DIR) + "/question_mark_twins.rps",
                                 std::string(MCDC_FIXTURE_DIR) + "/question_mark_twins.suite.json");
  return w;
}

std::vector<TestCase> repeated(const std::vector<TestCase>& suite, std::int64_t times) {
  std::vector<TestCase> out;
  for (std::int64_t k = 0; k < times; ++k) out.insert(out.end(), suite.begin(), suite.end());
  return out;
}

using Runner = SuiteResult (*)(const TypedProgram&, const DecisionSet&, const std::vector<TestCase>&,
                               const RunOptions&);

void run_corpus(benchmark::State& state, Runner runner) {
  std::vector<std::vector<TestCase>> suites;
  std::size_t tests = 0;
  for (const auto& w : corpus()) {
    suites.push_back(repeated(w.suite, state.range(0)));
    tests += suites.back().size();
  }
  RunOptions options = default_run_options();
  for (auto _ : state)
    for (std::size_t k = 0; k < suites.size(); ++k)
      benchmark::DoNotOptimize(runner(corpus()[k].program, corpus()[k].ds, suites[k], options));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * tests));
}

void run_twins(benchmark::State& state, Runner runner) {
  std::vector<TestCase> suite = repeated(twins().suite, state.range(0));
  RunOptions options = default_run_options();
  for (auto _ : state) benchmark::DoNotOptimize(runner(twins().program, twins().ds, suite, options));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * suite.size()));
}

void BM_CorpusParallel(benchmark::State& state) { run_corpus(state, &run_suite); }
void BM_CorpusSerial(benchmark::State& state) { run_corpus(state, &run_suite_serial); }
void BM_TwinsParallel(benchmark::State& state) { run_twins(state, &run_suite); }
void BM_TwinsSerial(benchmark::State& state) { run_twins(state, &run_suite_serial); }

}  // namespace

BENCHMARK(BM_CorpusParallel)->Arg(1)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CorpusSerial)->Arg(1)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TwinsParallel)->Arg(1)->Arg(8)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TwinsSerial)->Arg(1)->Arg(8)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
