#ifndef BESOVDENS_ESTIMATOR_HPP_
#define BESOVDENS_ESTIMATOR_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "besovdens/coefficients.hpp"
#include "besovdens/wavelet.hpp"

namespace besovdens {

enum class EstimatorKind { kLinear, kThresholded };

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::kLinear;
  int j0 = 0;  // coarse cutoff: levels 0..j0 are kept as-is
  int j1 = 0;  // fine cutoff (thresholded only): band (j0, j1] is thresholded
  double threshold_constant = 1.0;  // K in the threshold K sqrt(j/n)
  double support_halfwidth = 1.0;   // T
};

/// Empirical wavelet coefficients of a sample: alpha_k = mean phi_k(X_i),
/// beta_lambda = mean psi_lambda(X_i), for all active indices up to j_max.
/// Accumulation is in fixed sample order per index, so results are
/// identical regardless of external parallelism.
CoefficientTree empirical_coefficients(std::span<const Point> samples,
                                       const WaveletBasis& basis, int j_max,
                                       double support_halfwidth, int dim);
CoefficientTree empirical_coefficients(std::span<const double> samples,
                                       const WaveletBasis& basis, int j_max,
                                       double support_halfwidth);

/// Truncated empirical expansion: empirical coefficients up to level j0.
CoefficientTree linear_estimate(std::span<const double> samples,
                                const WaveletBasis& basis,
                                const EstimatorConfig& config);

/// Hard-thresholding estimator: levels 0..j0 kept as-is; on the band
/// (j0, j1] a coefficient survives only when |beta| > K sqrt(j/n); levels
/// above j1 are zero.
CoefficientTree threshold_estimate(std::span<const double> samples,
                                   const WaveletBasis& basis,
                                   const EstimatorConfig& config);

struct LevelSchedule {
  int j0 = 0;
  int j1 = 0;
};

/// Thresholding schedule: j0 = floor(log2(n) / (2 sigma_g + D)),
/// j1 = ceil(log2(n) / (2 sigma_g + D - 2D/p_g)).
LevelSchedule default_levels(std::size_t n, double sigma_g, double p_g,
                             int dim);

/// Risk-optimal linear truncation level:
/// j0 = round(log2(n) / (2 sigma_g + D + 2D/p_d' - 2D/p_g)).
int linear_optimal_level(std::size_t n, double sigma_g, double p_g,
                         double p_d, int dim);

}  // namespace besovdens

#endif  // BESOVDENS_ESTIMATOR_HPP_
