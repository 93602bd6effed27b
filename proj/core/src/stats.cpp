#include "besovdens/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "besovdens/sampling.hpp"

namespace besovdens {

MeanStderr mean_stderr(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("empty sample");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = ss / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

SlopeFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("need matching samples of size >= 2");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("degenerate abscissae");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double ssr = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      ssr += r * r;
    }
    fit.slope_se = std::sqrt(ssr / (n - 2.0) / sxx);
  }
  return fit;
}

SlopeFit fit_loglog_slope(std::span<const double> x,
                          std::span<const double> y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0)
      throw std::invalid_argument("log-log fit needs positive data");
    lx[i] = std::log2(x[i]);
    ly[i] = std::log2(y[i]);
  }
  return fit_line(lx, ly);
}

double bootstrap_fraction_greater(std::span<const double> a,
                                  std::span<const double> b, int resamples,
                                  std::uint64_t seed) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("paired samples required");
  SplitMix64 rng(seed);
  const std::size_t n = a.size();
  int greater = 0;
  for (int r = 0; r < resamples; ++r) {
    double da = 0, db = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t pick =
          static_cast<std::size_t>(rng.next() % static_cast<std::uint64_t>(n));
      da += a[pick];
      db += b[pick];
    }
    if (da > db) ++greater;
  }
  return static_cast<double>(greater) / static_cast<double>(resamples);
}

}  // namespace besovdens
