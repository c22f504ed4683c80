#include <benchmark/benchmark.h>

#include "ptune/configurators.hpp"
#include "ptune/landscape.hpp"
#include "ptune/operators.hpp"
#include "ptune/sat.hpp"
#include "ptune/stats.hpp"
#include "ptune/targets.hpp"

using namespace ptune;

static void BM_HarmonicSample(benchmark::State& state) {
  const HarmonicDistribution h(static_cast<int>(state.range(0)));
  Engine rng = make_engine(1);
  for (auto _ : state) benchmark::DoNotOptimize(h.sample(rng));
}
BENCHMARK(BM_HarmonicSample)->Arg(64)->Arg(1024)->Arg(65536);

static void BM_OnePlusOneEaRidge(benchmark::State& state) {
  Engine rng = make_engine(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_one_plus_one_ea(Benchmark::ridge, 50, 1.0, 2500, InitRule::ridge_start, rng));
  }
}
BENCHMARK(BM_OnePlusOneEaRidge);

static void BM_OnePlusOneEaLeadingOnes(benchmark::State& state) {
  Engine rng = make_engine(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_one_plus_one_ea(Benchmark::leadingones, 50, 1.6, 2500, InitRule::uniform, rng));
  }
}
BENCHMARK(BM_OnePlusOneEaLeadingOnes);

static void BM_RlsKOneMax(benchmark::State& state) {
  Engine rng = make_engine(4);
  for (auto _ : state) benchmark::DoNotOptimize(run_rls_k(Benchmark::onemax, 50, 3, 200, rng));
}
BENCHMARK(BM_RlsKOneMax);

static void BM_Saps(benchmark::State& state) {
  Engine gen = make_engine(5);
  const auto inst = generate_planted_3sat(100, 420, gen);
  Engine rng = make_engine(6);
  for (auto _ : state) benchmark::DoNotOptimize(run_saps(inst.formula, SapsParams{}, 1000, rng));
}
BENCHMARK(BM_Saps);

static void BM_ParamHsUnimodal(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  auto land = std::make_shared<const Landscape>(generate_synthetic(SyntheticKind::unimodal, m, m / 3));
  EvalProtocol eval;
  eval.target = std::make_shared<LandscapeTarget>(land);
  eval.cutoff = 1;
  eval.runs = 1;
  const auto stop = StopRule::first_target_sampled(land->targets());
  OperatorSpec op;
  op.kind = OperatorKind::harmonic;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_param_rls(land->space(), op, eval, stop, ++seed));
}
BENCHMARK(BM_ParamHsUnimodal)->Arg(64)->Arg(1024);

static void BM_CheckApproxUnimodal(benchmark::State& state) {
  const auto land = generate_synthetic(SyntheticKind::sawtooth, static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(check_approx_unimodal(land.values(), 2.0, 1));
}
BENCHMARK(BM_CheckApproxUnimodal)->Arg(200)->Arg(1000);

static void BM_MannWhitney(benchmark::State& state) {
  Engine rng = make_engine(7);
  std::vector<double> xs(200), ys(200);
  for (auto& v : xs) v = uniform_int(rng, 0, 100);
  for (auto& v : ys) v = uniform_int(rng, 0, 100);
  for (auto _ : state) benchmark::DoNotOptimize(mann_whitney_u(xs, ys));
}
BENCHMARK(BM_MannWhitney);

BENCHMARK_MAIN();
