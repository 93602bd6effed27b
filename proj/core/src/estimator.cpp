#include "besovdens/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "besovdens/besov.hpp"

namespace besovdens {

namespace {

// Translates whose factor w(2^j x - k) can be nonzero at x: those with
// 2^j x - k in [0, S], clamped to the active range.
struct KRange {
  int lo, hi;
};

KRange contributing_range(double scaled_x, double width, int active_lo,
                          int active_hi) {
  int lo = static_cast<int>(std::ceil(scaled_x - width));
  int hi = static_cast<int>(std::floor(scaled_x));
  lo = std::max(lo, active_lo);
  hi = std::min(hi, active_hi);
  return {lo, hi};
}

}  // namespace

CoefficientTree empirical_coefficients(std::span<const Point> samples,
                                       const WaveletBasis& basis, int j_max,
                                       double support_halfwidth, int dim) {
  if (samples.empty()) throw std::invalid_argument("empty sample");
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("unsupported dimension");

  const double S = basis.support_width();
  const double T = support_halfwidth;
  CoefficientTree tree(dim);

  // Father block.
  {
    const auto [alo, ahi] = translate_range(basis, 0, T);
    CoefficientTree::FatherMap sums;
    for (const Point& x : samples) {
      if (dim == 1) {
        const auto [lo, hi] = contributing_range(x[0], S, alo, ahi);
        for (int k = lo; k <= hi; ++k) {
          const double v = basis.father(x[0] - k);
          if (v != 0.0) sums[translate1(k)] += v;
        }
      } else {
        const auto [lo0, hi0] = contributing_range(x[0], S, alo, ahi);
        const auto [lo1, hi1] = contributing_range(x[1], S, alo, ahi);
        for (int k0 = lo0; k0 <= hi0; ++k0) {
          const double w0 = basis.father(x[0] - k0);
          if (w0 == 0.0) continue;
          for (int k1 = lo1; k1 <= hi1; ++k1) {
            const double w1 = basis.father(x[1] - k1);
            if (w1 != 0.0) sums[Translate{k0, k1}] += w0 * w1;
          }
        }
      }
    }
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    for (const auto& [k, s] : sums) tree.set_father(k, s * inv_n);
  }

  for (int j = 0; j <= j_max; ++j) {
    tree.ensure_level(j);
    const auto [alo, ahi] = translate_range(basis, j, T);
    const double scale = std::exp2(0.5 * dim * j);
    CoefficientTree::LevelMap sums;
    for (const Point& x : samples) {
      if (dim == 1) {
        const double sx = std::ldexp(x[0], j);
        const auto [lo, hi] = contributing_range(sx, S, alo, ahi);
        for (int k = lo; k <= hi; ++k) {
          const double v = basis.mother(sx - k);
          if (v != 0.0) sums[MotherKey{translate1(k), 1}] += scale * v;
        }
      } else {
        const double sx0 = std::ldexp(x[0], j);
        const double sx1 = std::ldexp(x[1], j);
        const auto [lo0, hi0] = contributing_range(sx0, S, alo, ahi);
        const auto [lo1, hi1] = contributing_range(sx1, S, alo, ahi);
        for (unsigned eps = 1; eps <= 3; ++eps) {
          for (int k0 = lo0; k0 <= hi0; ++k0) {
            const double a0 = sx0 - k0;
            const double w0 =
                (eps & 1u) ? basis.mother(a0) : basis.father(a0);
            if (w0 == 0.0) continue;
            for (int k1 = lo1; k1 <= hi1; ++k1) {
              const double a1 = sx1 - k1;
              const double w1 =
                  (eps & 2u) ? basis.mother(a1) : basis.father(a1);
              if (w1 != 0.0)
                sums[MotherKey{Translate{k0, k1}, eps}] += scale * w0 * w1;
            }
          }
        }
      }
    }
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    for (const auto& [key, s] : sums)
      tree.set_mother(WaveletIndex{j, key.k, key.orientation}, s * inv_n);
  }
  return tree;
}

CoefficientTree empirical_coefficients(std::span<const double> samples,
                                       const WaveletBasis& basis, int j_max,
                                       double support_halfwidth) {
  std::vector<Point> pts;
  pts.reserve(samples.size());
  for (double x : samples) pts.push_back(point1(x));
  return empirical_coefficients(std::span<const Point>(pts), basis, j_max,
                                support_halfwidth, 1);
}

CoefficientTree linear_estimate(std::span<const double> samples,
                                const WaveletBasis& basis,
                                const EstimatorConfig& config) {
  return empirical_coefficients(samples, basis, config.j0,
                                config.support_halfwidth);
}

CoefficientTree threshold_estimate(std::span<const double> samples,
                                   const WaveletBasis& basis,
                                   const EstimatorConfig& config) {
  if (config.j1 < config.j0)
    throw std::invalid_argument("j1 must be at least j0");
  const std::size_t n = samples.size();
  if (std::exp2(config.j1) > static_cast<double>(n))
    throw std::invalid_argument("2^{D j1} must not exceed the sample size");
  CoefficientTree full = empirical_coefficients(samples, basis, config.j1,
                                                config.support_halfwidth);
  CoefficientTree out = full.truncated(config.j0);
  for (int j = config.j0 + 1; j <= config.j1; ++j) {
    const double threshold = config.threshold_constant *
                             std::sqrt(static_cast<double>(j) /
                                       static_cast<double>(n));
    out.ensure_level(j);
    for (const auto& [key, v] : full.level(j))
      if (std::abs(v) > threshold)
        out.set_mother(WaveletIndex{j, key.k, key.orientation}, v);
  }
  return out;
}

LevelSchedule default_levels(std::size_t n, double sigma_g, double p_g,
                             int dim) {
  if (n < 2) throw std::invalid_argument("need at least two samples");
  const double inv_pg = std::isinf(p_g) ? 0.0 : 1.0 / p_g;
  const double coarse_den = 2.0 * sigma_g + dim;
  const double fine_den = 2.0 * sigma_g + dim - 2.0 * dim * inv_pg;
  if (fine_den <= 0.0)
    throw std::invalid_argument("2 sigma_g + D - 2D/p_g must be positive");
  const double lg = std::log2(static_cast<double>(n));
  LevelSchedule s;
  s.j0 = static_cast<int>(std::floor(lg / coarse_den));
  s.j1 = static_cast<int>(std::ceil(lg / fine_den));
  return s;
}

int linear_optimal_level(std::size_t n, double sigma_g, double p_g,
                         double p_d, int dim) {
  const double inv_pg = std::isinf(p_g) ? 0.0 : 1.0 / p_g;
  const double pdc = conjugate_exponent(p_d);
  const double inv_pdc = std::isinf(pdc) ? 0.0 : 1.0 / pdc;
  const double den =
      2.0 * sigma_g + dim + 2.0 * dim * inv_pdc - 2.0 * dim * inv_pg;
  if (den <= 0.0)
    throw std::invalid_argument("nonpositive exponent denominator");
  const double lg = std::log2(static_cast<double>(n));
  return static_cast<int>(std::lround(lg / den));
}

}  // namespace besovdens
