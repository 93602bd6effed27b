#ifndef BESOVDENS_TRANSFORM_HPP_
#define BESOVDENS_TRANSFORM_HPP_

#include <functional>
#include <vector>

#include "besovdens/coefficients.hpp"
#include "besovdens/wavelet.hpp"

namespace besovdens {

using DensityFn = std::function<double(const Point&)>;

/// Wavelet analysis by quadrature: alpha_k = integral of f phi_k and
/// beta_lambda = integral of f psi_lambda over each basis support
/// intersected with [-T, T]^D, for all active indices up to j_max.
///
/// Quadrature is the composite midpoint rule at step 2^-quad_exponent,
/// which is exact for dyadic step integrands (Haar) and O(h^2) otherwise;
/// the step must resolve the finest wavelet: quad_exponent >= j_max + 2.
CoefficientTree decompose(const DensityFn& f, const WaveletBasis& basis,
                          int j_max, double support_halfwidth,
                          int quad_exponent, int dim = 1);

/// Synthesis at a point: sum_k alpha_k phi_k(x) + sum_lambda beta_lambda
/// psi_lambda(x).
double reconstruct_at(const CoefficientTree& tree, const WaveletBasis& basis,
                      const Point& x);

inline double reconstruct_at1(const CoefficientTree& tree,
                              const WaveletBasis& basis, double x) {
  return reconstruct_at(tree, basis, point1(x));
}

/// Synthesis on a 1-D grid of nodes (dimension-1 trees).
std::vector<double> reconstruct(const CoefficientTree& tree,
                                const WaveletBasis& basis,
                                const std::vector<double>& grid);

/// Synthesis on the uniform 1-D lattice x_i = lo + (i + offset) step,
/// i = 0..count-1, accumulated per coefficient over its support; much
/// faster than pointwise evaluation for wide supports.
std::vector<double> reconstruct_uniform(const CoefficientTree& tree,
                                        const WaveletBasis& basis, double lo,
                                        double step, std::size_t count,
                                        double offset = 0.0);

/// Uniform nodes lo, lo+h, ..., hi with h = 2^-grid_exponent.
std::vector<double> uniform_grid(double lo, double hi, int grid_exponent);

/// Composite midpoint quadrature of f over [lo, hi] at step 2^-quad_exponent.
double quadrature_1d(const std::function<double(double)>& f, double lo,
                     double hi, int quad_exponent);

}  // namespace besovdens

#endif  // BESOVDENS_TRANSFORM_HPP_
