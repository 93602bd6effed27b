#ifndef BESOVDENS_STATS_HPP_
#define BESOVDENS_STATS_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace besovdens {

struct MeanStderr {
  double mean = 0;
  double stderr_of_mean = 0;
};

MeanStderr mean_stderr(std::span<const double> values);

struct SlopeFit {
  double slope = 0;
  double slope_se = 0;
  double intercept = 0;
};

/// Ordinary least squares y = intercept + slope * x with the usual standard
/// error of the slope (needs at least 3 points for a finite se).
SlopeFit fit_line(std::span<const double> x, std::span<const double> y);

/// OLS on (log2 x, log2 y): the log-log convergence slope.
SlopeFit fit_loglog_slope(std::span<const double> x,
                          std::span<const double> y);

/// Kolmogorov-Smirnov statistic of a sample against a CDF given as callable.
template <typename Cdf>
double ks_statistic(std::vector<double> sorted_sample, Cdf&& cdf) {
  std::size_t n = sorted_sample.size();
  double ks = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sorted_sample[i]);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - f;
    const double lo = f - static_cast<double>(i) / static_cast<double>(n);
    ks = std::max(ks, std::max(hi, lo));
  }
  return ks;
}

/// Percentile bootstrap over paired per-trial values: returns the fraction
/// of resamples in which mean(a) > mean(b). Deterministic in the seed.
double bootstrap_fraction_greater(std::span<const double> a,
                                  std::span<const double> b,
                                  int resamples, std::uint64_t seed);

}  // namespace besovdens

#endif  // BESOVDENS_STATS_HPP_
