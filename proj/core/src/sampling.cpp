#include "besovdens/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "besovdens/transform.hpp"

namespace besovdens {

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t n,
                                 std::uint64_t trial) {
  SplitMix64 mix(n * 0x9e3779b97f4a7c15ull + trial + 1);
  return seed ^ mix.next();
}

TabulatedDensity tabulate(const CoefficientTree& tree,
                          const WaveletBasis& basis, double support_halfwidth,
                          int grid_exponent, double clip_tolerance,
                          bool allow_clipping) {
  if (tree.dim() != 1)
    throw std::invalid_argument("tabulation expects a 1-D tree");
  TabulatedDensity d;
  d.lo = -support_halfwidth;
  d.hi = support_halfwidth;
  d.grid_exponent = grid_exponent;
  d.source_hash = tree_hash(tree);

  const double step = std::ldexp(1.0, -grid_exponent);
  const std::int64_t cells =
      static_cast<std::int64_t>(std::llround((d.hi - d.lo) / step));
  if (cells < 2) throw std::invalid_argument("support too small for grid");

  d.pdf = reconstruct_uniform(tree, basis, d.lo, step,
                              static_cast<std::size_t>(cells) + 1);
  for (double& v : d.pdf) v = std::max(v, 0.0);

  const std::vector<double> mid = reconstruct_uniform(
      tree, basis, d.lo, step, static_cast<std::size_t>(cells), 0.5);
  d.cell_mass.resize(static_cast<std::size_t>(cells));
  double mass = 0.0;
  double clipped = 0.0;
  for (std::int64_t i = 0; i < cells; ++i) {
    const double v = mid[static_cast<std::size_t>(i)];
    if (v < 0.0) clipped -= v * step;
    const double m = std::max(v, 0.0) * step;
    d.cell_mass[static_cast<std::size_t>(i)] = m;
    mass += m;
  }
  d.clipped_mass = clipped;
  if (clipped > clip_tolerance && !allow_clipping)
    throw std::domain_error(
        "reconstruction has negative mass above the clip tolerance");
  if (mass <= 0.0) throw std::domain_error("tabulated density has no mass");
  d.renormalization = mass;

  d.cdf.resize(static_cast<std::size_t>(cells) + 1);
  d.cdf[0] = 0.0;
  double acc = 0.0;
  for (std::int64_t i = 0; i < cells; ++i) {
    d.cell_mass[static_cast<std::size_t>(i)] /= mass;
    acc += d.cell_mass[static_cast<std::size_t>(i)];
    d.cdf[static_cast<std::size_t>(i) + 1] = acc;
  }
  d.cdf.back() = 1.0;
  return d;
}

double cdf_at(const TabulatedDensity& density, double x) {
  if (x <= density.lo) return 0.0;
  if (x >= density.hi) return 1.0;
  const double step = std::ldexp(1.0, -density.grid_exponent);
  const double pos = (x - density.lo) / step;
  const double fl = std::floor(pos);
  std::size_t i = static_cast<std::size_t>(fl);
  if (i >= density.cell_mass.size()) i = density.cell_mass.size() - 1;
  return density.cdf[i] + (pos - fl) * density.cell_mass[i];
}

double pdf_at(const TabulatedDensity& density, double x) {
  if (x < density.lo || x > density.hi) return 0.0;
  const double step = std::ldexp(1.0, -density.grid_exponent);
  const double pos = (x - density.lo) / step;
  const double fl = std::floor(pos);
  std::size_t i = static_cast<std::size_t>(fl);
  if (i + 1 >= density.pdf.size()) return density.pdf.back();
  const double frac = pos - fl;
  return density.pdf[i] + frac * (density.pdf[i + 1] - density.pdf[i]);
}

std::vector<double> sample(const TabulatedDensity& density, std::size_t n,
                           std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample count must be positive");
  const double step = std::ldexp(1.0, -density.grid_exponent);
  SplitMix64 rng(seed);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    // Find the cell with cdf[c] <= u < cdf[c+1].
    const auto it =
        std::upper_bound(density.cdf.begin(), density.cdf.end(), u);
    std::size_t c = static_cast<std::size_t>(
        std::distance(density.cdf.begin(), it));
    c = (c == 0) ? 0 : c - 1;
    if (c >= density.cell_mass.size()) c = density.cell_mass.size() - 1;
    const double m = density.cell_mass[c];
    // The CDF is linear inside the cell (piecewise-constant density).
    const double frac = m > 0.0 ? (u - density.cdf[c]) / m : 0.5;
    out.push_back(density.lo + (static_cast<double>(c) + frac) * step);
  }
  return out;
}

}  // namespace besovdens
