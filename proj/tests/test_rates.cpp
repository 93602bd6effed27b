#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "besovdens/rates.hpp"
#include "besovdens/sampling.hpp"

using namespace besovdens;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ProblemSpec make_spec(int dim, double sd, double pd, double sg, double pg) {
  ProblemSpec s;
  s.dim = dim;
  s.discriminator = BallParams{sd, pd, 2.0, 1.0};
  s.generator = BallParams{sg, pg, 2.0, 1.0};
  return s;
}

}  // namespace

TEST_CASE("known rates from the literature") {
  SUBCASE("Wasserstein over unsmoothed densities: n^{-1/D}") {
    const auto r = minimax_exponent(make_spec(4, 1.0, kInf, 0.0, kInf));
    CHECK(r.exponent == doctest::Approx(0.25));
    CHECK(r.regime == Regime::kDense);
  }
  SUBCASE("Sobolev IPM case p = q = 2") {
    for (double sg : {0.5, 1.0, 2.0}) {
      for (double sd : {0.0, 0.3, 1.0}) {
        const auto r = minimax_exponent(make_spec(1, sd, 2.0, sg, 2.0));
        const double dense = (sg + sd) / (2 * sg + 1);
        CHECK(r.term_dense == doctest::Approx(dense));
        CHECK(r.exponent == doctest::Approx(std::min(0.5, std::min(
            dense, r.term_sparse))));
      }
    }
  }
  SUBCASE("L2 density estimation rate") {
    const auto r = minimax_exponent(make_spec(1, 0.0, 2.0, 2.0, 2.0));
    CHECK(r.exponent == doctest::Approx(0.4));
    CHECK(r.regime == Regime::kDense);
    CHECK(r.term_parametric == doctest::Approx(0.5));
    CHECK(r.term_sparse == doctest::Approx(0.5));
  }
}

TEST_CASE("lower bound exponents") {
  ProblemSpec s = make_spec(1, 0.0, 2.0, 2.0, 2.0);
  const auto lb = lower_bound_exponents(s);
  CHECK(lb.dense == doctest::Approx(0.4));
  CHECK(lb.sparse == doctest::Approx(0.5));
  CHECK(lb.sparse_has_log);

  SUBCASE("sparse exponent equals the minimax third term") {
    SplitMix64 rng(1);
    for (int trial = 0; trial < 200; ++trial) {
      const double pg = 1.0 + rng.uniform() * 4.0;
      const double pd = 1.0 + rng.uniform() * 4.0;
      const double sg = 1.0 / pg + rng.uniform() * 2.0;
      const double sd = rng.uniform() * 2.0;
      const ProblemSpec spec = make_spec(1, sd, pd, sg, pg);
      const auto r = minimax_exponent(spec);
      const auto l = lower_bound_exponents(spec);
      CHECK(l.sparse == doctest::Approx(r.term_sparse).epsilon(1e-12));
      CHECK(l.dense == doctest::Approx(r.term_dense).epsilon(1e-12));
    }
  }
  SUBCASE("p_g = inf collapses the denominators") {
    const ProblemSpec spec = make_spec(1, 0.5, 2.0, 1.0, kInf);
    const auto l = lower_bound_exponents(spec);
    // Both terms share the denominator 2 sigma_g + D.
    CHECK(l.dense * (2 * 1.0 + 1) == doctest::Approx(1.5));
    CHECK(l.sparse * (2 * 1.0 + 1) == doctest::Approx(1.5 + 1 - 0.5));
  }
}

TEST_CASE("linear exponent") {
  SUBCASE("p_d = inf substitution") {
    const ProblemSpec s = make_spec(1, 0.5, kInf, 1.0, 2.0);
    const auto r = linear_exponent(s);
    // Third term: (sg+sd-D/pg+D)/(2sg+D-2D/pg+2D) with p_d' = 1.
    CHECK(r.term_sparse == doctest::Approx((1.0 + 0.5 - 0.5 + 1) /
                                            (2 + 1 - 1 + 2)));
  }
  SUBCASE("Donoho linear rate at sigma_d = 0, p_d = inf") {
    for (double sg : {1.0, 1.5, 2.5}) {
      for (double pg : {1.0, 1.5, 2.0}) {
        const ProblemSpec s = make_spec(1, 0.0, kInf, sg, pg);
        const auto r = linear_exponent(s);
        const double expect =
            (sg - 1.0 / pg + 1.0) / (2 * sg + 1 - 2.0 / pg + 2.0);
        CHECK(r.term_sparse == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
  SUBCASE("effective smoothness form agrees with the sparse term") {
    SplitMix64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
      const double pg = 1.0 + rng.uniform() * 3.0;
      const double pd = 1.0 + rng.uniform() * 3.0;
      const double sg = 1.0 / pg + 0.1 + rng.uniform() * 2.0;
      const double sd = rng.uniform() * 2.0;
      const ProblemSpec s = make_spec(1, sd, pd, sg, pg);
      const auto r = linear_exponent(s);
      const double sgp = r.effective_smoothness;
      if (2 * sgp + 1 > 0) {
        CHECK((sgp + sd) / (2 * sgp + 1) ==
              doctest::Approx(r.term_sparse).epsilon(1e-12));
      }
    }
  }
  SUBCASE("linear never beats the general rate") {
    SplitMix64 rng(3);
    int strict = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const double pg = 1.0 + rng.uniform() * 4.0;
      const double pd_choices[] = {1.0, 1.0 + rng.uniform() * 4.0, kInf};
      const double pd = pd_choices[rng.next() % 3];
      const double sg = 1.0 / pg + rng.uniform() * 2.5;
      const double sd = rng.uniform() * 2.5;
      const int dim = 1 + static_cast<int>(rng.next() % 4);
      ProblemSpec s = make_spec(dim, sd, pd, sg * dim, pg);
      // Keep the hypotheses: sigma_g >= D/p_g and p_d' >= p_g.
      if (!(std::isinf(pd) ? 1.0 >= pg : pd / (pd - 1.0) >= pg)) continue;
      const auto general = minimax_exponent(s);
      const auto linear = linear_exponent(s);
      CHECK(linear.exponent <= general.exponent * (1 + 1e-12) + 1e-15);
      if (linear.exponent < general.exponent - 1e-9) ++strict;
    }
    CHECK(strict > 0);
  }
}

TEST_CASE("rate monotone in both smoothness orders") {
  SplitMix64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const double pg = 1.0 + rng.uniform() * 3.0;
    const double pd = 1.0 + rng.uniform() * 3.0;
    const double sg = 1.0 / pg + rng.uniform() * 2.0;
    const double sd = rng.uniform() * 2.0;
    const double bump = rng.uniform();
    const auto base = minimax_exponent(make_spec(1, sd, pd, sg, pg));
    const auto more_d = minimax_exponent(make_spec(1, sd + bump, pd, sg, pg));
    const auto more_g = minimax_exponent(make_spec(1, sd, pd, sg + bump, pg));
    CHECK(more_d.exponent >= base.exponent - 1e-12);
    CHECK(more_g.exponent >= base.exponent - 1e-12);
  }
}

TEST_CASE("classify_regime") {
  SUBCASE("infeasible region of the figure-1 slice") {
    const auto d = classify_regime(make_spec(4, 0.5, 1.2, 0.5, 2.0));
    CHECK(d.regime == Regime::kInfeasible);
    CHECK(d.infeasible_margin == doctest::Approx(1.0 - 4.0 / 3.0));
  }
  SUBCASE("sparse/dense boundary lies on sigma_g + 3 sigma_d = 4") {
    for (double sd = 0.4; sd <= 1.2; sd += 0.1) {
      const double sg = 4.0 - 3.0 * sd;
      if (sg < 2.0 / 2.0) continue;
      const auto r = minimax_exponent(make_spec(4, sd, 1.2, sg, 2.0));
      CHECK(r.term_dense == doctest::Approx(r.term_sparse).epsilon(1e-12));
      const auto d = classify_regime(make_spec(4, sd, 1.2, sg, 2.0));
      CHECK(std::abs(d.dense_minus_sparse) < 1e-12);
    }
  }
  SUBCASE("strong discriminator smoothness is parametric") {
    for (double sg : {1.0, 2.0, 5.0}) {
      const double sd = 0.5 * 1 + 1.0;
      const auto d = classify_regime(make_spec(1, sd, 2.0, sg, 2.0));
      CHECK(d.regime == Regime::kParametric);
    }
  }
  SUBCASE("p_d = 1 leaves no dense region") {
    for (double sd = 0.1; sd <= 2.0; sd += 0.17) {
      for (double sg = 1.0; sg <= 3.0; sg += 0.23) {
        const auto d = classify_regime(make_spec(1, sd, 1.0, sg, 1.0));
        CHECK(d.regime != Regime::kDense);
      }
    }
  }
}

TEST_CASE("phase diagram grid") {
  const auto grid = phase_diagram(4, 1.2, 2.0, 0.0, 3.0, 0.0, 3.0, 60,
                                  EstimatorClass::kGeneral);
  const auto lin = phase_diagram(4, 1.2, 2.0, 0.0, 3.0, 0.0, 3.0, 60,
                                 EstimatorClass::kLinear);
  int counts[4] = {0, 0, 0, 0};
  int lin_infeasible = 0, lin_parametric = 0;
  for (const auto& c : grid.cells) {
    ++counts[static_cast<int>(c.regime)];
    if (c.regime != Regime::kInfeasible) {
      CHECK(c.exponent >= 0.0);
      CHECK(c.exponent <= 0.5);
    }
  }
  for (const auto& c : lin.cells) {
    lin_infeasible += c.regime == Regime::kInfeasible;
    lin_parametric += c.regime == Regime::kParametric;
  }
  // All four regions appear for general estimators.
  for (int r = 0; r < 4; ++r) CHECK(counts[r] > 0);
  CHECK(lin_infeasible > counts[static_cast<int>(Regime::kInfeasible)]);
  CHECK(lin_parametric < counts[static_cast<int>(Regime::kParametric)]);
  CHECK(lin_parametric > 0);

  SUBCASE("csv schema") {
    std::ostringstream os;
    write_phase_csv(grid, os);
    const std::string text = os.str();
    CHECK(text.rfind("sigma_d,sigma_g,exponent,regime\n", 0) == 0);
    std::size_t rows = 0;
    for (char ch : text) rows += ch == '\n';
    CHECK(rows == 1 + 60 * 60);
  }
  SUBCASE("svg heat map") {
    std::ostringstream os;
    write_phase_svg(grid, os);
    const std::string text = os.str();
    CHECK(text.find("<svg") != std::string::npos);
    CHECK(text.find("<polyline") != std::string::npos);
  }
}

TEST_CASE("exponent is continuous across the sparse/dense boundary") {
  // With p_d = 1.2, p_g = 2, D = 4 the boundary is sigma_g + 3 sigma_d = 4.
  for (double sd = 0.35; sd <= 1.25; sd += 0.05) {
    const double sg = 4.0 - 3.0 * sd;
    if (sg <= 2.0) continue;
    const auto r = minimax_exponent(make_spec(4, sd, 1.2, sg, 2.0));
    CHECK(std::abs(r.term_dense - r.term_sparse) < 1e-12);
  }
}

TEST_CASE("degenerate sparse denominator is flagged") {
  // p_g = 1, sigma_g small: 2 sigma_g + D(1 - 2/p_g) <= 0.
  const auto r = minimax_exponent(make_spec(1, 1.0, 2.0, 0.3, 1.0));
  CHECK_FALSE(r.hyp_denominator);
  CHECK(std::isinf(r.term_sparse));
  CHECK(r.exponent == doctest::Approx(std::min(0.5, r.term_dense)));
}
