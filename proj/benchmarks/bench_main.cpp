#include <benchmark/benchmark.h>

#include <cmath>

#include "mtlspec/corpus.hpp"
#include "mtlspec/exemplar.hpp"
#include "mtlspec/fragment.hpp"
#include "mtlspec/monitor.hpp"
#include "mtlspec/persistence.hpp"
#include "mtlspec/translator.hpp"

using namespace mtlspec;

namespace {

SpecTree deep_tree(std::uint64_t seed) { return random_fragment_tree({seed, 4}); }

Trace sine_trace(double duration, double dt) {
  const auto times = sample_times(dt, duration);
  std::vector<double> speed, rpm;
  for (double t : times) {
    speed.push_back(100 + 20 * std::sin(t / 3));
    rpm.push_back(3500 + 800 * std::cos(t / 5));
  }
  return Trace(times, {{"speed", speed}, {"rpm", rpm}});
}

void BM_Translate(benchmark::State& state) {
  const auto tree = deep_tree(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(translate(tree));
}
BENCHMARK(BM_Translate)->Arg(1)->Arg(7)->Arg(42);

void BM_FormatParse(benchmark::State& state) {
  const auto f = translate(deep_tree(7));
  for (auto _ : state) benchmark::DoNotOptimize(parse(format(f)));
}
BENCHMARK(BM_FormatParse);

void BM_Reverse(benchmark::State& state) {
  const auto f = translate(deep_tree(7));
  for (auto _ : state) benchmark::DoNotOptimize(reverse(f));
}
BENCHMARK(BM_Reverse);

void BM_RecognizeStrict(benchmark::State& state) {
  const auto f = parse("[]_[0,40]((speed < 80) -> ([]_[0,40](rpm < 4000)))");
  for (auto _ : state) benchmark::DoNotOptimize(recognize(f, FragmentMode::Strict));
}
BENCHMARK(BM_RecognizeStrict);

void BM_EvaluateReactiveResponse(benchmark::State& state) {
  const auto f = parse("[]_[0,40]((speed < 110) -> ([]_[0,40](rpm < 4000)))");
  const auto trace = sine_trace(80 + static_cast<double>(state.range(0)), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(f, trace));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trace.size()));
}
BENCHMARK(BM_EvaluateReactiveResponse)->Arg(0)->Arg(1000)->Arg(10000);

void BM_GenerateRecurrence(benchmark::State& state) {
  const auto f = parse("[]_[0,30](<>_[0,10](speed > 100))");
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate(f, 3, seed++));
}
BENCHMARK(BM_GenerateRecurrence);

void BM_SpecJsonRoundTrip(benchmark::State& state) {
  const auto tree = deep_tree(42);
  for (auto _ : state) benchmark::DoNotOptimize(spec_from_json(spec_to_json(tree)));
}
BENCHMARK(BM_SpecJsonRoundTrip);

void BM_Corpus(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(run_corpus());
}
BENCHMARK(BM_Corpus);

}  // namespace

BENCHMARK_MAIN();
