#include "besovdens/transform.hpp"

#include <cmath>
#include <stdexcept>

namespace besovdens {

namespace {

// Midpoint quadrature of f(x) * w(2^j x - k) over the support of the basis
// factor intersected with [-T, T], in one dimension.
double factor_integral(const std::function<double(double)>& integrand,
                       double lo, double hi, double step) {
  if (hi <= lo) return 0.0;
  const std::int64_t cells =
      static_cast<std::int64_t>(std::llround((hi - lo) / step));
  double acc = 0.0;
  for (std::int64_t i = 0; i < cells; ++i) {
    const double x = lo + (static_cast<double>(i) + 0.5) * step;
    acc += integrand(x);
  }
  return acc * step;
}

}  // namespace

double quadrature_1d(const std::function<double(double)>& f, double lo,
                     double hi, int quad_exponent) {
  return factor_integral(f, lo, hi, std::ldexp(1.0, -quad_exponent));
}

CoefficientTree decompose(const DensityFn& f, const WaveletBasis& basis,
                          int j_max, double support_halfwidth,
                          int quad_exponent, int dim) {
  if (quad_exponent < j_max + 2)
    throw std::invalid_argument(
        "quadrature resolution too coarse for the requested level");
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("unsupported dimension");

  const double T = support_halfwidth;
  const double S = basis.support_width();
  const double step = std::ldexp(1.0, -quad_exponent);
  CoefficientTree tree(dim);

  auto box_integral = [&](int level, const Translate& k, unsigned orientation,
                          double scale) {
    // Support of the tensor factor in dimension d: (k_d, k_d + S) / 2^j.
    if (dim == 1) {
      const double lo = std::max(std::ldexp(static_cast<double>(k[0]), -level),
                                 -T);
      const double hi = std::min(
          std::ldexp(static_cast<double>(k[0]) + S, -level), T);
      auto integrand = [&](double x) {
        const double arg = std::ldexp(x, level) - k[0];
        const double w =
            (orientation & 1u) ? basis.mother(arg) : basis.father(arg);
        return w == 0.0 ? 0.0 : f(point1(x)) * w;
      };
      return scale * factor_integral(integrand, lo, hi, step);
    }
    const double lo0 =
        std::max(std::ldexp(static_cast<double>(k[0]), -level), -T);
    const double hi0 =
        std::min(std::ldexp(static_cast<double>(k[0]) + S, -level), T);
    const double lo1 =
        std::max(std::ldexp(static_cast<double>(k[1]), -level), -T);
    const double hi1 =
        std::min(std::ldexp(static_cast<double>(k[1]) + S, -level), T);
    if (hi0 <= lo0 || hi1 <= lo1) return 0.0;
    const std::int64_t c0 =
        static_cast<std::int64_t>(std::llround((hi0 - lo0) / step));
    const std::int64_t c1 =
        static_cast<std::int64_t>(std::llround((hi1 - lo1) / step));
    double acc = 0.0;
    for (std::int64_t i = 0; i < c0; ++i) {
      const double x0 = lo0 + (static_cast<double>(i) + 0.5) * step;
      const double a0 = std::ldexp(x0, level) - k[0];
      const double w0 =
          (orientation & 1u) ? basis.mother(a0) : basis.father(a0);
      if (w0 == 0.0) continue;
      for (std::int64_t l = 0; l < c1; ++l) {
        const double x1 = lo1 + (static_cast<double>(l) + 0.5) * step;
        const double a1 = std::ldexp(x1, level) - k[1];
        const double w1 =
            (orientation & 2u) ? basis.mother(a1) : basis.father(a1);
        if (w1 == 0.0) continue;
        acc += f(Point{x0, x1}) * w0 * w1;
      }
    }
    return scale * acc * step * step;
  };

  for (const Translate& k : active_father_translates(basis, T, dim)) {
    const double v = box_integral(0, k, 0, 1.0);
    if (v != 0.0) tree.set_father(k, v);
  }
  for (int j = 0; j <= j_max; ++j) {
    tree.ensure_level(j);
    const double scale = std::exp2(0.5 * dim * j);
    for (const WaveletIndex& idx : active_indices(basis, j, T, dim)) {
      const double v = box_integral(j, idx.k, idx.orientation, scale);
      if (v != 0.0) tree.set_mother(idx, v);
    }
  }
  return tree;
}

double reconstruct_at(const CoefficientTree& tree, const WaveletBasis& basis,
                      const Point& x) {
  const int dim = tree.dim();
  double acc = 0.0;
  for (const auto& [k, v] : tree.father_block())
    acc += v * evaluate_father(basis, k, x, dim);
  for (int j = 0; j <= tree.max_level(); ++j)
    for (const auto& [key, v] : tree.level(j))
      acc += v * evaluate_mother(basis,
                                 WaveletIndex{j, key.k, key.orientation}, x,
                                 dim);
  return acc;
}

std::vector<double> reconstruct(const CoefficientTree& tree,
                                const WaveletBasis& basis,
                                const std::vector<double>& grid) {
  if (tree.dim() != 1)
    throw std::invalid_argument("grid reconstruction expects dimension 1");
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[i] = reconstruct_at1(tree, basis, grid[i]);
  return out;
}

std::vector<double> reconstruct_uniform(const CoefficientTree& tree,
                                        const WaveletBasis& basis, double lo,
                                        double step, std::size_t count,
                                        double offset) {
  if (tree.dim() != 1)
    throw std::invalid_argument("uniform reconstruction expects dimension 1");
  std::vector<double> out(count, 0.0);
  const double S = basis.support_width();
  auto add_entry = [&](double sup_lo, double sup_hi, auto&& value_at) {
    double i_lo = std::ceil((sup_lo - lo) / step - offset);
    double i_hi = std::floor((sup_hi - lo) / step - offset);
    std::int64_t a = static_cast<std::int64_t>(std::max(i_lo, 0.0));
    std::int64_t b = std::min(static_cast<std::int64_t>(i_hi),
                              static_cast<std::int64_t>(count) - 1);
    for (std::int64_t i = a; i <= b; ++i) {
      const double x = lo + (static_cast<double>(i) + offset) * step;
      out[static_cast<std::size_t>(i)] += value_at(x);
    }
  };
  for (const auto& [k, v] : tree.father_block()) {
    const double kd = k[0];
    add_entry(kd, kd + S,
              [&, v, kd](double x) { return v * basis.father(x - kd); });
  }
  for (int j = 0; j <= tree.max_level(); ++j) {
    const double scale = std::exp2(0.5 * j);
    for (const auto& [key, v] : tree.level(j)) {
      const double kd = key.k[0];
      add_entry(std::ldexp(kd, -j), std::ldexp(kd + S, -j),
                [&, v, kd, j, scale](double x) {
                  return v * scale * basis.mother(std::ldexp(x, j) - kd);
                });
    }
  }
  return out;
}

std::vector<double> uniform_grid(double lo, double hi, int grid_exponent) {
  const double step = std::ldexp(1.0, -grid_exponent);
  const std::int64_t count =
      static_cast<std::int64_t>(std::llround((hi - lo) / step));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count) + 1);
  for (std::int64_t i = 0; i <= count; ++i)
    grid.push_back(lo + static_cast<double>(i) * step);
  return grid;
}

}  // namespace besovdens
