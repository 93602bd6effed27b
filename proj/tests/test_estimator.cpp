#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <limits>
#include <vector>

#include "besovdens/besov.hpp"
#include "besovdens/estimator.hpp"
#include "besovdens/sampling.hpp"
#include "besovdens/transform.hpp"

using namespace besovdens;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("degenerate samples give unit coefficients") {
  const WaveletBasis haar = WaveletBasis::build("haar", 8);
  const std::vector<double> xs(100, 0.25);
  const auto tree = empirical_coefficients(xs, haar, 2, 1.0);
  CHECK(tree.father(translate1(0)) == doctest::Approx(1.0));
  CHECK(tree.mother1(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("antipodal samples cancel the level-0 coefficient") {
  const WaveletBasis haar = WaveletBasis::build("haar", 8);
  const std::vector<double> xs = {0.25, 0.75};
  const auto tree = empirical_coefficients(xs, haar, 1, 1.0);
  CHECK(tree.mother1(0, 0) == 0.0);
}

TEST_CASE("empty sample is rejected") {
  const WaveletBasis haar = WaveletBasis::build("haar", 8);
  const std::vector<double> xs;
  CHECK_THROWS_AS(empirical_coefficients(xs, haar, 2, 1.0),
                  std::invalid_argument);
}

TEST_CASE("uniform-sample coefficients concentrate near zero") {
  const WaveletBasis haar = WaveletBasis::build("haar", 10);
  const std::size_t n = 100000;
  // Uniform on [0, 1]: exact mothers vanish.
  CoefficientTree uniform(1);
  uniform.set_father1(0, 1.0);
  const auto density = tabulate(uniform, haar, 1.0, 12);
  const auto xs = sample(density, n, 2024);
  const auto tree = empirical_coefficients(xs, haar, 3, 1.0);
  const double bound = 4.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j <= 3; ++j)
    for (const auto& [key, v] : tree.level(j)) CHECK(std::abs(v) < bound);
}

TEST_CASE("linear estimate is the truncated empirical expansion") {
  const WaveletBasis haar = WaveletBasis::build("haar", 8);
  SplitMix64 rng(9);
  std::vector<double> xs;
  for (int i = 0; i < 300; ++i) xs.push_back(rng.uniform() * 2.0 - 1.0);
  EstimatorConfig cfg;
  cfg.kind = EstimatorKind::kLinear;
  cfg.j0 = 2;
  cfg.support_halfwidth = 1.0;
  const auto lin = linear_estimate(xs, haar, cfg);
  const auto full = empirical_coefficients(xs, haar, 5, 1.0);
  CHECK(lin.max_level() == 2);
  for (int j = 0; j <= 2; ++j) {
    REQUIRE(lin.level(j).size() == full.level(j).size());
    for (const auto& [key, v] : lin.level(j))
      CHECK(v == full.mother(WaveletIndex{j, key.k, key.orientation}));
  }
}

TEST_CASE("threshold with K = 0 equals the linear estimate at j1") {
  const WaveletBasis haar = WaveletBasis::build("haar", 8);
  SplitMix64 rng(10);
  std::vector<double> xs;
  for (int i = 0; i < 256; ++i) xs.push_back(rng.uniform());
  EstimatorConfig cfg;
  cfg.kind = EstimatorKind::kThresholded;
  cfg.j0 = 1;
  cfg.j1 = 4;
  cfg.threshold_constant = 0.0;
  cfg.support_halfwidth = 1.0;
  const auto thr = threshold_estimate(xs, haar, cfg);
  EstimatorConfig lin_cfg;
  lin_cfg.kind = EstimatorKind::kLinear;
  lin_cfg.j0 = 4;
  lin_cfg.support_halfwidth = 1.0;
  const auto lin = linear_estimate(xs, haar, lin_cfg);
  CHECK(to_text(thr) == to_text(lin));
}

TEST_CASE("a huge K reduces the threshold estimate to the linear one") {
  const WaveletBasis haar = WaveletBasis::build("haar", 8);
  SplitMix64 rng(11);
  std::vector<double> xs;
  for (int i = 0; i < 256; ++i) xs.push_back(rng.uniform());
  EstimatorConfig cfg;
  cfg.kind = EstimatorKind::kThresholded;
  cfg.j0 = 1;
  cfg.j1 = 4;
  cfg.threshold_constant = 1e9;
  cfg.support_halfwidth = 1.0;
  const auto thr = threshold_estimate(xs, haar, cfg);
  EstimatorConfig lin_cfg;
  lin_cfg.kind = EstimatorKind::kLinear;
  lin_cfg.j0 = 1;
  lin_cfg.support_halfwidth = 1.0;
  const auto lin = linear_estimate(xs, haar, lin_cfg);
  // Band levels exist but are empty.
  for (int j = 2; j <= 4; ++j) CHECK(thr.level(j).empty());
  CHECK(to_text(thr.truncated(1)) == to_text(lin));
}

TEST_CASE("thresholding keeps a spike and kills noise") {
  const WaveletBasis haar = WaveletBasis::build("haar", 12);
  const std::size_t n = 4096;
  CoefficientTree truth(1);
  truth.set_father1(-1, 0.5);
  truth.set_father1(0, 0.5);
  const int spike_level = 3, spike_k = 2;
  truth.set_mother1(spike_level, spike_k, 0.15);
  const auto density = tabulate(truth, haar, 1.0, 12);
  const auto xs = sample(density, n, 31415);

  EstimatorConfig cfg;
  cfg.kind = EstimatorKind::kThresholded;
  cfg.j0 = 1;
  cfg.j1 = 5;
  cfg.threshold_constant = 1.0;
  cfg.support_halfwidth = 1.0;
  const auto est = threshold_estimate(xs, haar, cfg);
  CHECK(est.mother1(spike_level, spike_k) != 0.0);

  std::size_t zeroed = 0, total = 0;
  for (int j = cfg.j0 + 1; j <= cfg.j1; ++j) {
    for (const auto& idx : active_indices(haar, j, 1.0, 1)) {
      if (j == spike_level && idx.k[0] == spike_k) continue;
      ++total;
      if (est.mother(idx) == 0.0) ++zeroed;
    }
  }
  CHECK(static_cast<double>(zeroed) >= 0.9 * static_cast<double>(total));
}

TEST_CASE("threshold sandwich") {
  const WaveletBasis haar = WaveletBasis::build("haar", 10);
  SplitMix64 rng(22);
  std::vector<double> xs;
  for (int i = 0; i < 1024; ++i) xs.push_back(rng.uniform() * 2.0 - 1.0);
  EstimatorConfig cfg;
  cfg.kind = EstimatorKind::kThresholded;
  cfg.j0 = 2;
  cfg.j1 = 5;
  cfg.threshold_constant = 1.0;
  cfg.support_halfwidth = 1.0;
  const auto thr = threshold_estimate(xs, haar, cfg);
  const auto emp = empirical_coefficients(xs, haar, cfg.j1, 1.0);
  for (int j = 0; j <= thr.max_level(); ++j) {
    for (const auto& [key, v] : thr.level(j)) {
      const double e = emp.mother(WaveletIndex{j, key.k, key.orientation});
      CHECK(std::abs(v) <= std::abs(e));
      if (j > cfg.j0) {
        const double t = cfg.threshold_constant *
                         std::sqrt(static_cast<double>(j) / 1024.0);
        CHECK(std::abs(v) > t);
      }
    }
  }
}

TEST_CASE("level schedules") {
  SUBCASE("floor and ceil of the stated formulas") {
    const auto s = default_levels(1024, 2.0, 2.0, 1);
    CHECK(s.j0 == 2);
    CHECK(s.j1 == 3);
    const auto s2 = default_levels(std::size_t{1} << 14, 1.0, kInf, 1);
    CHECK(s2.j0 == 4);
    CHECK(s2.j1 == 5);
  }
  SUBCASE("monotone in n") {
    int prev0 = -1, prev1 = -1;
    for (int k = 4; k <= 20; ++k) {
      const auto s = default_levels(std::size_t{1} << k, 1.5, 2.0, 1);
      CHECK(s.j0 >= prev0);
      CHECK(s.j1 >= prev1);
      CHECK(s.j0 <= s.j1);
      prev0 = s.j0;
      prev1 = s.j1;
    }
  }
  SUBCASE("degenerate denominator") {
    CHECK_THROWS_AS(default_levels(1024, 0.25, 1.0, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("linear optimal level") {
  CHECK(linear_optimal_level(1024, 2.0, 2.0, 2.0, 1) == 2);
  // p_d = 1 means p_d' = inf: the 2D/p_d' term drops.
  const double lg = 14.0;
  const int expect = static_cast<int>(std::lround(lg / (2.0 + 1.0 - 1.0)));
  CHECK(linear_optimal_level(std::size_t{1} << 14, 1.0, 2.0, 1.0, 1) ==
        expect);
  int prev = 100;
  for (double sg = 0.5; sg <= 3.0; sg += 0.5) {
    const int j0 = linear_optimal_level(std::size_t{1} << 12, sg, 2.0, 2.0, 1);
    CHECK(j0 <= prev);
    prev = j0;
  }
}

TEST_CASE("empirical coefficients are unbiased") {
  const WaveletBasis haar = WaveletBasis::build("haar", 12);
  CoefficientTree truth(1);
  truth.set_father1(-1, 0.5);
  truth.set_father1(0, 0.5);
  truth.set_mother1(1, 0, 0.15);
  const auto density = tabulate(truth, haar, 1.0, 12);

  const int reps = 200;
  const std::size_t n = 256;
  std::vector<double> alpha0, beta10;
  for (int r = 0; r < reps; ++r) {
    const auto xs = sample(density, n, derive_stream_seed(5150, n, r));
    const auto tree = empirical_coefficients(xs, haar, 2, 1.0);
    alpha0.push_back(tree.father(translate1(0)));
    beta10.push_back(tree.mother1(1, 0));
  }
  auto check_mean = [&](const std::vector<double>& vals, double expected) {
    double mean = 0;
    for (double v : vals) mean += v;
    mean /= reps;
    double sd = 0;
    for (double v : vals) sd += (v - mean) * (v - mean);
    sd = std::sqrt(sd / (reps - 1));
    CHECK(std::abs(mean - expected) <=
          4.0 * sd / std::sqrt(static_cast<double>(reps)) + 1e-12);
  };
  check_mean(alpha0, 0.5);
  check_mean(beta10, 0.15);
}

TEST_CASE("coefficient variance scales as 1/n") {
  const WaveletBasis haar = WaveletBasis::build("haar", 12);
  CoefficientTree truth(1);
  truth.set_father1(-1, 0.5);
  truth.set_father1(0, 0.5);
  const auto density = tabulate(truth, haar, 1.0, 12);
  const double sup_density = 0.5;

  const int reps = 300;
  for (const std::size_t n : {std::size_t{128}, std::size_t{512}}) {
    for (int j = 0; j <= 3; ++j) {
      std::vector<double> vals;
      for (int r = 0; r < reps; ++r) {
        const auto xs = sample(density, n, derive_stream_seed(777, n, r));
        const auto tree = empirical_coefficients(xs, haar, j, 1.0);
        vals.push_back(tree.mother1(j, 0));
      }
      double mean = 0;
      for (double v : vals) mean += v;
      mean /= reps;
      double var = 0;
      for (double v : vals) var += (v - mean) * (v - mean);
      var /= (reps - 1);
      CHECK(var <= sup_density / static_cast<double>(n) * 1.5);
    }
  }
}
