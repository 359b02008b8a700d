#include <benchmark/benchmark.h>

#include "gauss_regret/complexity.hpp"
#include "gauss_regret/regret.hpp"

using namespace gauss_regret;

namespace {

SetSpec cloud() {
  std::vector<Vector> pts;
  Rng rng(7);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 50; ++i) {
    Vector v(4);
    for (int k = 0; k < 4; ++k) v[k] = nd(rng);
    pts.push_back(v);
  }
  return SetSpec::finite_points(pts);
}

void BM_regret_mc_parallel(benchmark::State& st) {
  const SetSpec s = cloud();
  MCConfig cfg{static_cast<std::size_t>(st.range(0)), 32, 1};
  for (auto _ : st) benchmark::DoNotOptimize(regret_mc(s, cfg).value);
}

void BM_regret_mc_serial(benchmark::State& st) {
  const SetSpec s = cloud();
  MCConfig cfg{static_cast<std::size_t>(st.range(0)), 32, 1};
  for (auto _ : st) benchmark::DoNotOptimize(regret_mc_serial(s, cfg).value);
}

void BM_width_parallel(benchmark::State& st) {
  const SetSpec s = cloud();
  MCConfig cfg{static_cast<std::size_t>(st.range(0)), 32, 1};
  for (auto _ : st) benchmark::DoNotOptimize(gaussian_width_mc(s, cfg).value);
}

void BM_width_serial(benchmark::State& st) {
  const SetSpec s = cloud();
  MCConfig cfg{static_cast<std::size_t>(st.range(0)), 32, 1};
  for (auto _ : st) benchmark::DoNotOptimize(gaussian_width_mc_serial(s, cfg).value);
}

void BM_quadrature(benchmark::State& st) {
  const SetSpec s = SetSpec::ball(Vector::Zero(3), 1.5);
  QuadratureOptions q;
  q.tol = 1e-5;
  q.parallel = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(regret_quadrature(s, q).value);
}

}  // namespace

BENCHMARK(BM_regret_mc_parallel)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_regret_mc_serial)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_width_parallel)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_width_serial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_quadrature)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
