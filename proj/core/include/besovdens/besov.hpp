#ifndef BESOVDENS_BESOV_HPP_
#define BESOVDENS_BESOV_HPP_

#include <span>
#include <vector>

#include "besovdens/coefficients.hpp"
#include "besovdens/wavelet.hpp"

namespace besovdens {

/// Parameters of a closed Besov ball B^sigma_{p,q}(L) in dimension D:
/// smoothness sigma >= 0, integrability power p in [1, inf], fine index q in
/// [1, inf], radius L > 0. Infinite exponents are represented by INFINITY.
struct BesovBall {
  double sigma = 0;
  double p = 2;
  double q = 2;
  double radius = 1;
  int dim = 1;
};

/// Hoelder conjugate p' = p/(p-1) with 1' = inf and inf' = 1.
double conjugate_exponent(double p);

/// l^p norm of a value sequence, with l^inf as the maximum of |x|.
double lp_norm(std::span<const double> values, double p);

/// Besov sequence norm of a coefficient tree:
///   ||alpha||_{l^p} + || { 2^{j(sigma + D(1/2 - 1/p))} ||beta_j||_{l^p} }_j
///   ||_{l^q},
/// with mother levels j = 0 .. max_level.
double besov_norm(const CoefficientTree& tree, double sigma, double p,
                  double q);
double besov_norm(const CoefficientTree& tree, const BesovBall& ball);

/// Exact Besov IPM of a coefficient difference against the discriminator
/// ball, restricted to the represented levels:
///   L * max( ||eta_alpha||_{l^{p'}},
///            || { 2^{-j(sigma + D(1/2 - 1/p))} ||eta_{beta,j}||_{l^{p'}} }_j
///            ||_{l^{q'}} ).
/// This is the supremum of <gamma, diff> over besov_norm(gamma) <= L: the
/// dual of a sum of two norms is the max of the two dual norms, and the
/// dual of the weighted l^q(l^p) composite is the conjugate-weighted
/// l^{q'}(l^{p'}) norm.
double dual_ipm(const CoefficientTree& diff, const BesovBall& discriminator);

/// Constructive Hoelder-equality witness: a tree gamma with
/// besov_norm(gamma; ball) <= L and <gamma, diff> = dual_ipm(diff, ball).
/// Throws on zero input.
CoefficientTree extremal_witness(const CoefficientTree& diff,
                                 const BesovBall& discriminator);

/// Uniform bound for members of a Besov ball with sigma > D/p:
///   4 A ||psi||_inf L (1 - 2^{-(sigma - D/p) q'})^{-1/q'}.
/// Throws when sigma <= D/p (the geometric series diverges).
double sup_norm_bound(const BesovBall& ball, const WaveletBasis& basis);

}  // namespace besovdens

#endif  // BESOVDENS_BESOV_HPP_
