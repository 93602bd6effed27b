#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "besovdens/adversarial.hpp"
#include "besovdens/sampling.hpp"
#include "besovdens/transform.hpp"

using namespace besovdens;

namespace {

ProblemSpec haar_spec() {
  ProblemSpec s;
  s.dim = 1;
  s.discriminator = BallParams{0.5, 2.0, 2.0, 1.0};
  s.generator = BallParams{0.8, 2.0, 2.0, 2.0};
  return s;
}

}  // namespace

TEST_CASE("translate grid") {
  SUBCASE("level 0 is the origin") {
    const auto g = translate_grid(0, 1.0, 1);
    REQUIRE(g.size() == 1);
    CHECK(g[0][0] == 0);
  }
  SUBCASE("level 1 with unit half-width") {
    const auto g = translate_grid(1, 1.0, 1);
    REQUIRE(g.size() == 2);
    CHECK(g[0][0] == -1);
    CHECK(g[1][0] == 1);
  }
  SUBCASE("two dimensions square the count") {
    CHECK(translate_grid(2, 1.0, 2).size() == 16);
  }
}

TEST_CASE("varshamov-gilbert codebook") {
  auto hamming = [](const std::vector<std::uint8_t>& a,
                    const std::vector<std::uint8_t>& b) {
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
  };
  CHECK_THROWS_AS(vg_codebook(7), std::invalid_argument);
  for (const int m : {8, 16, 32}) {
    const auto words = vg_codebook(m);
    const std::size_t expected_count =
        static_cast<std::size_t>(std::ceil(std::exp2(m / 8.0)));
    CHECK(words.size() >= expected_count);
    bool has_zero = false;
    for (const auto& w : words) {
      bool zero = true;
      for (auto b : w) zero &= b == 0;
      has_zero |= zero;
    }
    CHECK(has_zero);
    const int min_d = (m + 7) / 8;
    for (std::size_t i = 0; i < words.size(); ++i)
      for (std::size_t j = i + 1; j < words.size(); ++j)
        CHECK(hamming(words[i], words[j]) >= min_d);
  }
  SUBCASE("deterministic in the seed") {
    CHECK(vg_codebook(16) == vg_codebook(16));
  }
}

TEST_CASE("sparse family construction and audits") {
  const WaveletBasis haar = WaveletBasis::build("haar", 12);
  const ProblemSpec spec = haar_spec();
  const auto fam = sparse_family(3, spec, haar);

  CHECK(fam.size() == 8);  // 2^{Dj} members
  CHECK(fam.amplitude_g > 0);
  CHECK(fam.amplitude_d ==
        doctest::Approx(std::exp2(-3.0 * (0.5 + 0.5 - 0.5))));
  CHECK(supports_disjoint(fam));

  for (std::size_t i = 0; i < fam.size(); ++i) {
    const auto audit = audit_member(fam, i, 1024);
    CHECK(audit.in_ball);
    CHECK(audit.nonnegative);
    CHECK(audit.unit_mass);
    CHECK(audit.min_value >= 0.5 * fam.plateau - 1e-12);
  }

  SUBCASE("nonnegativity on a dense grid") {
    for (double x = -2.0; x <= 2.0; x += 1.0 / 512)
      CHECK(fam.member_pdf(0, point1(x)) >= -1e-12);
  }

  SUBCASE("separation matches the coefficient pairing and quadrature") {
    const auto tree_i = fam.member_tree(0);
    const auto tree_j = fam.member_tree(3);
    const auto f = fam.discriminator_tree(0);
    const double pairing = inner_product(f, tree_i - tree_j);
    CHECK(pairing ==
          doctest::Approx(fam.amplitude_g * fam.amplitude_d).epsilon(1e-12));
    const double quad = quadrature_1d(
        [&](double x) {
          return reconstruct_at1(f, haar, x) *
                 (fam.member_pdf(0, point1(x)) - fam.member_pdf(3, point1(x)));
        },
        -2.0, 2.0, 12);
    // ||psi||_2^2 c_g c_d with ||psi||_2 = 1 for Haar.
    CHECK(std::abs(quad - fam.amplitude_g * fam.amplitude_d) < 1e-6);
  }

  SUBCASE("dual separation dominates the restricted pairing") {
    const double s = min_separation(fam);
    CHECK(s >= fam.amplitude_g * fam.amplitude_d * (1 - 1e-12));
  }
}

TEST_CASE("dense family construction and audits") {
  const WaveletBasis haar = WaveletBasis::build("haar", 12);
  ProblemSpec spec = haar_spec();
  spec.n = 4096;
  const auto fam = dense_family(3, spec, haar);

  CHECK(fam.size() >= 2);
  CHECK(supports_disjoint(fam));
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const auto audit = audit_member(fam, i, *spec.n);
    CHECK(audit.in_ball);
    CHECK(audit.nonnegative);
    CHECK(audit.unit_mass);
    CHECK(audit.fano_ok);
  }
  // Pairwise separation >= c_g c_d 2^{Dj} / 8.
  const double floor_sep =
      fam.amplitude_g * fam.amplitude_d * std::exp2(3.0) / 8.0;
  CHECK(min_separation(fam) >= floor_sep * (1 - 1e-12));

  SUBCASE("discriminators stay inside their ball") {
    for (std::size_t i = 0; i < fam.size(); ++i) {
      const double norm =
          besov_norm(fam.discriminator_tree(i), spec.discriminator.sigma,
                     spec.discriminator.p, spec.discriminator.q);
      CHECK(norm <= spec.discriminator.radius * (1 + 1e-12));
    }
  }
}

TEST_CASE("kl divergence quadrature") {
  auto g = [](double x) { return (x >= 0 && x <= 1) ? 1.0 : 0.0; };
  SUBCASE("identical densities have zero divergence") {
    CHECK(kl_divergence(g, g, 0.0, 1.0, 10) == 0.0);
    // Fano condition trivially holds for any n.
    CHECK(0.0 <= std::log(2.0) / 16.0);
  }
  SUBCASE("known closed form") {
    auto h = [](double x) {
      if (x < 0 || x > 1) return 0.0;
      return x < 0.5 ? 1.5 : 0.5;
    };
    const double expect = 0.75 * std::log(1.5) + 0.25 * std::log(0.5);
    CHECK(kl_divergence(h, g, 0.0, 1.0, 12) ==
          doctest::Approx(expect).epsilon(1e-9));
  }
  SUBCASE("support violation throws") {
    auto h = [](double x) { return (x >= 0 && x <= 2) ? 0.5 : 0.0; };
    CHECK_THROWS_AS(kl_divergence(h, g, 0.0, 2.0, 10), std::domain_error);
  }
}

TEST_CASE("kl_check against the perturbation bound") {
  const WaveletBasis haar = WaveletBasis::build("haar", 12);
  const ProblemSpec spec = haar_spec();
  const auto fam = sparse_family(4, spec, haar);
  for (std::size_t i = 0; i < fam.size(); i += 5) {
    const auto r = kl_check(fam, i, 1024);
    CHECK(r.kl_per_sample > 0.0);
    CHECK(r.kl_per_sample <= r.bound + 1e-8);
    CHECK(r.density_floor >= 0.5 * fam.plateau - 1e-12);
    // Quadrature agrees with the generic routine.
    const double direct = kl_divergence(
        [&](double x) { return fam.member_pdf(i, point1(x)); },
        [&](double x) { return fam.base_pdf(point1(x)); }, -2.0, 2.0, 13);
    CHECK(direct == doctest::Approx(r.kl_per_sample).epsilon(1e-10));
  }
}

TEST_CASE("fano checks pass on the paper's sparse schedule") {
  const WaveletBasis haar = WaveletBasis::build("haar", 12);
  ProblemSpec spec = haar_spec();
  const double den = 2 * spec.generator.sigma + 1 - 2 / spec.generator.p;
  for (const std::uint64_t n : {std::uint64_t{1} << 12, std::uint64_t{1} << 16}) {
    const double x = std::log2(static_cast<double>(n) /
                               std::log(static_cast<double>(n)));
    const int j = std::max(1, static_cast<int>(std::lround(x / den)));
    spec.n = n;
    const auto fam = sparse_family(j, spec, haar);
    for (std::size_t i = 0; i < fam.size(); ++i)
      CHECK(kl_check(fam, i, n).fano_ok);
    CHECK(fano_bound(fam, n) > 0.0);
  }
}

TEST_CASE("fano bound rejects degenerate families") {
  const WaveletBasis haar = WaveletBasis::build("haar", 12);
  const ProblemSpec spec = haar_spec();
  const auto singleton = sparse_family(0, spec, haar);
  CHECK(singleton.size() == 1);
  CHECK_THROWS_AS(fano_bound(singleton, 100), std::invalid_argument);
}

TEST_CASE("two-dimensional sparse family is disjoint and in-ball") {
  const WaveletBasis haar = WaveletBasis::build("haar", 10);
  ProblemSpec spec;
  spec.dim = 2;
  spec.discriminator = BallParams{0.5, 2.0, 2.0, 1.0};
  spec.generator = BallParams{1.0, 2.0, 2.0, 4.0};
  const auto fam = sparse_family(2, spec, haar);
  CHECK(fam.size() == 16);
  CHECK(supports_disjoint(fam));
  const auto audit = audit_member(fam, 5, 256);
  CHECK(audit.in_ball);
  CHECK(audit.nonnegative);
}
