#include <benchmark/benchmark.h>

#include <memory>

#include "dyson/drift.hpp"
#include "dyson/kernels.hpp"
#include "dyson/sampling.hpp"
#include "dyson/sde.hpp"
#include "dyson/special.hpp"

using namespace dyson;

static void BM_Airy(benchmark::State& st) {
  double x = -30.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(airy(x));
    x = x > 9.0 ? -30.0 : x + 0.37;
  }
}
BENCHMARK(BM_Airy);

static void BM_PearceyPQ(benchmark::State& st) {
  const PearceyOptions opts{static_cast<int>(st.range(0))};
  for (auto _ : st) benchmark::DoNotOptimize(pearcey_pq(0.7, opts));
}
BENCHMARK(BM_PearceyPQ)->Arg(160)->Arg(320);

static void BM_FiniteNDrift(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  std::vector<double> xs(n);
  for (std::size_t j = 0; j < n; ++j) xs[j] = static_cast<double>(j);
  const auto x = LabeledState::increasing(xs);
  const DriftModel m = FiniteNModel{2.0, n, DysonModel::ou};
  for (auto _ : st) benchmark::DoNotOptimize(drift_vector(m, x));
}
BENCHMARK(BM_FiniteNDrift)->Arg(16)->Arg(64)->Arg(256);

static void BM_IntegratePath(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  std::vector<double> xs(n);
  for (std::size_t j = 0; j < n; ++j) xs[j] = static_cast<double>(j);
  const auto x = LabeledState::increasing(xs);
  IntegratorConfig cfg;
  cfg.horizon = 0.1;
  cfg.record_stride = 100;
  std::uint64_t i = 0;
  for (auto _ : st) benchmark::DoNotOptimize(integrate(x, FiniteNModel{2.0, n, DysonModel::plain}, cfg, i++));
}
BENCHMARK(BM_IntegratePath)->Arg(8)->Arg(32);

static void BM_Tridiagonal(benchmark::State& st) {
  Rng rng = make_rng(1, 0);
  for (auto _ : st) benchmark::DoNotOptimize(tridiag_beta_sample(static_cast<std::size_t>(st.range(0)), 2.0, rng));
}
BENCHMARK(BM_Tridiagonal)->Arg(200)->Arg(1000);

static void BM_SineDppSample(benchmark::State& st) {
  const DppSampler s(SineKernel{}, DppSampleConfig{});
  std::uint64_t i = 0;
  for (auto _ : st) benchmark::DoNotOptimize(s.sample(i++));
}
BENCHMARK(BM_SineDppSample);

static void BM_AiryResolvent(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(ResolventOperator(12.0, static_cast<std::size_t>(st.range(0))));
}
BENCHMARK(BM_AiryResolvent)->Arg(32)->Arg(64);

static void BM_TacnodeEval(benchmark::State& st) {
  const auto k = TacnodeKernel::make();
  double x = -2.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize((*k.evaluator)(x, 0.3));
    x = x > 2.0 ? -2.0 : x + 0.11;
  }
}
BENCHMARK(BM_TacnodeEval);
BENCHMARK_MAIN();
