#include <benchmark/benchmark.h>

#include <vector>

#include "besovdens/besov.hpp"
#include "besovdens/estimator.hpp"
#include "besovdens/sampling.hpp"
#include "besovdens/wavelet.hpp"

using namespace besovdens;

static void BM_BuildBasis(benchmark::State& state) {
  const int G = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto basis = WaveletBasis::build("db4", G);
    benchmark::DoNotOptimize(basis);
  }
}
BENCHMARK(BM_BuildBasis)->DenseRange(8, 14, 2);

static CoefficientTree make_tree(int levels, int per_level) {
  SplitMix64 rng(1);
  CoefficientTree t(1);
  for (int j = 0; j < levels; ++j)
    for (int i = 0; i < per_level; ++i)
      t.add_mother(WaveletIndex{j, translate1(static_cast<int>(rng.next() % 64) - 32), 1},
                   rng.uniform() * 2 - 1);
  return t;
}

static void BM_DualIpm(benchmark::State& state) {
  const CoefficientTree t = make_tree(6, static_cast<int>(state.range(0)));
  const BesovBall ball{1.0, 2.0, 2.0, 1.0, 1};
  for (auto _ : state) {
    double v = dual_ipm(t, ball);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * t.nonzero_count());
}
BENCHMARK(BM_DualIpm)->RangeMultiplier(4)->Range(4, 256);

static void BM_ExtremalWitness(benchmark::State& state) {
  const CoefficientTree t = make_tree(6, 32);
  const BesovBall ball{1.0, 1.2, 3.0, 1.0, 1};
  for (auto _ : state) {
    auto w = extremal_witness(t, ball);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(BM_ExtremalWitness);

static void BM_EmpiricalCoefficients(benchmark::State& state) {
  const WaveletBasis haar = WaveletBasis::build("haar", 12);
  CoefficientTree uniform(1);
  uniform.set_father1(0, 1.0);
  const auto density = tabulate(uniform, haar, 1.0, 12);
  const auto xs = sample(density, static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) {
    auto tree = empirical_coefficients(xs, haar, 6, 1.0);
    benchmark::DoNotOptimize(tree);
  }
  state.SetItemsProcessed(state.iterations() * xs.size());
}
BENCHMARK(BM_EmpiricalCoefficients)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

static void BM_Sampling(benchmark::State& state) {
  const WaveletBasis haar = WaveletBasis::build("haar", 12);
  CoefficientTree uniform(1);
  uniform.set_father1(0, 1.0);
  const auto density = tabulate(uniform, haar, 1.0, 12);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto xs = sample(density, 4096, ++seed);
    benchmark::DoNotOptimize(xs);
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_Sampling);

BENCHMARK_MAIN();
