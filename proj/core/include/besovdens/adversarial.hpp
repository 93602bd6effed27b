#ifndef BESOVDENS_ADVERSARIAL_HPP_
#define BESOVDENS_ADVERSARIAL_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "besovdens/besov.hpp"
#include "besovdens/coefficients.hpp"
#include "besovdens/rates.hpp"
#include "besovdens/wavelet.hpp"

namespace besovdens {

/// Disjoint-support translate grid at resolution j:
/// K_j = { -(2^j - 1) A + 2 l A : l = 0 .. 2^j - 1 }^D. The spacing 2A
/// keeps the perturbation wavelets' supports pairwise disjoint.
std::vector<Translate> translate_grid(int level, double support_halfwidth,
                                      int dim);

/// Varshamov-Gilbert codebook: at least 2^{m/8} binary words of length
/// m >= 8 including the all-zeros word, pairwise Hamming distance >= m/8.
/// Randomized greedy with a deterministic seed.
std::vector<std::vector<std::uint8_t>> vg_codebook(
    int m, std::uint64_t seed = 0x5eed5eed5eed5eedull);

/// A lower-bound instance family: perturbations g0 + c_g sum tau_lambda
/// psi_lambda of a plateau base density, with matched discriminators
/// c_d sum tau_lambda psi_lambda.
struct AdversarialFamily {
  enum class Kind { kSparse, kDense };

  Kind kind = Kind::kSparse;
  int level = 0;
  int dim = 1;
  const WaveletBasis* basis = nullptr;
  BallParams generator;
  BallParams discriminator;

  // Base density g0: constant `plateau` on [-A, A]^D with a quintic
  // roll-off of width `rolloff` to zero, unit mass.
  double plateau = 0;
  double plateau_halfwidth = 0;  // A
  double rolloff = 1.0;          // W

  double amplitude_g = 0;  // c_g
  double amplitude_d = 0;  // c_d

  std::vector<WaveletIndex> slots;  // lambda per translate-grid position
  std::vector<std::vector<signed char>> codebook;  // tau in {-1,0,+1}^slots

  CoefficientTree base_tree;  // g0 decomposed up to `level`

  std::size_t size() const { return codebook.size(); }

  double base_pdf(const Point& x) const;
  double member_pdf(std::size_t member, const Point& x) const;
  CoefficientTree perturbation_tree(std::size_t member) const;
  CoefficientTree member_tree(std::size_t member) const;
  /// The matched discriminator c_d sum tau psi in Omega_d.
  CoefficientTree discriminator_tree(std::size_t member) const;
};

/// Sparse instance: one perturbed slot per member (tau one-hot),
/// c_g = min(positivity cap, ball cap[, Fano cap when spec.n is set]),
/// c_d = L_d 2^{-j(sigma_d + D/2 - D/p_d)}.
AdversarialFamily sparse_family(int level, const ProblemSpec& spec,
                                const WaveletBasis& basis);

/// Dense instance: all slots perturbed with +-1 signs from the
/// Varshamov-Gilbert codebook; c_d = L_d 2^{-j(sigma_d + D/2)}.
AdversarialFamily dense_family(int level, const ProblemSpec& spec,
                               const WaveletBasis& basis);

struct KlCheckResult {
  double kl_per_sample = 0;   // KL(member || g0) by quadrature
  double bound = 0;           // (2 / density floor) ||member - g0||_2^2
  double density_floor = 0;   // min of member over the perturbation support
  bool fano_ok = false;       // n * KL <= log(family size) / 16
};

KlCheckResult kl_check(const AdversarialFamily& family, std::size_t member,
                       std::uint64_t n, int quad_exponent = 13);

/// Quadrature KL(f || g) of 1-D densities over [lo, hi]. Throws when f is
/// positive where g vanishes or f is negative at a node.
double kl_divergence(const std::function<double(double)>& f,
                     const std::function<double(double)>& g, double lo,
                     double hi, int quad_exponent);

/// Certified Fano lower bound s/16 for sample size n, where s is the
/// minimum pairwise dual-IPM separation. Throws when any member fails the
/// KL condition or the family has fewer than two members.
double fano_bound(const AdversarialFamily& family, std::uint64_t n,
                  int quad_exponent = 13);

/// Minimum pairwise dual-IPM separation of the family.
double min_separation(const AdversarialFamily& family);

struct MemberAudit {
  double besov_norm = 0;
  double mass = 0;
  double min_value = 0;       // over the perturbation supports
  double global_min = 0;      // over the whole support
  double kl_per_sample = 0;
  bool fano_ok = false;
  bool in_ball = false;
  bool nonnegative = false;
  bool unit_mass = false;
};

MemberAudit audit_member(const AdversarialFamily& family, std::size_t member,
                         std::uint64_t n, int quad_exponent = 13);

/// Pairwise support-overlap check of the perturbation wavelets; returns
/// true when all supports are disjoint.
bool supports_disjoint(const AdversarialFamily& family);

}  // namespace besovdens

#endif  // BESOVDENS_ADVERSARIAL_HPP_
