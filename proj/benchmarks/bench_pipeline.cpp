#include <benchmark/benchmark.h>

#include <random>

#include "pimecc/experiments.hpp"
#include "pimecc/pipeline.hpp"
#include "pimecc/workloads.hpp"

namespace {

using namespace pimecc;

std::vector<Bits> rows_of(std::size_t rows, std::size_t inputs) {
  std::mt19937_64 rng(1);
  std::vector<Bits> in(rows, Bits(inputs));
  for (auto& r : in)
    for (auto& b : r) b = rng() & 1u;
  return in;
}

void BM_PlanDetection(benchmark::State& state) {
  const auto net = gen_random(static_cast<std::size_t>(state.range(0)), 16, 1);
  PipelineOptions opt;
  opt.R = 16;
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan(net, PipelineMode::Detection, std::nullopt, {1, 0}, opt));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PlanDetection)->Arg(1000)->Arg(10000);

void BM_PlanCorrection(benchmark::State& state) {
  const auto net = gen_random(static_cast<std::size_t>(state.range(0)), 16, 1);
  PipelineOptions opt;
  opt.R = 16;
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan(net, PipelineMode::Correction, HammingCode::build(4), {1, 0}, opt));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PlanCorrection)->Arg(1000)->Arg(10000);

// Row-parallel execution; rows are packed 64 to a word.
void BM_RunCorrection(benchmark::State& state) {
  const auto net = gen_random(2000, 16, 2);
  const std::size_t rows = static_cast<std::size_t>(state.range(0));
  PipelineOptions opt;
  opt.R = 8;
  const Plan p = plan(net, PipelineMode::Correction, HammingCode::build(4), {rows, 0}, opt);
  const auto in = rows_of(rows, 16);
  RunOptions ro;
  ro.errors = {1e-4, 7};
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(p.schedule, p.layout, net, in, ro));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows));
}
BENCHMARK(BM_RunCorrection)->Arg(1)->Arg(64)->Arg(256);

void BM_EvaluateWords(benchmark::State& state) {
  const auto net = gen_fft(16, FixedPointFormat{8, 7});
  std::vector<std::uint64_t> words(net.input_count(), 0x5555aaaa3333ccccULL);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_words(net, words));
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_EvaluateWords);

void BM_AnalyticCost(benchmark::State& state) {
  AnalyticParams ap;
  ap.gate_count = 400000;
  ap.input_count = 64;
  ap.mode = PipelineMode::Correction;
  ap.parity_bits = 3;
  for (auto _ : state) {
    for (std::size_t R : {16u, 64u, 256u, 1024u}) {
      ap.R = R;
      benchmark::DoNotOptimize(analytic_cost(ap));
    }
  }
}
BENCHMARK(BM_AnalyticCost);

}  // namespace

BENCHMARK_MAIN();
