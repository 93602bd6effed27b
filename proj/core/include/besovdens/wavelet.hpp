#ifndef BESOVDENS_WAVELET_HPP_
#define BESOVDENS_WAVELET_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace besovdens {

// Evaluation and estimation are implemented for dimensions 1 and 2
// (tensor-product wavelets). Rate formulas accept any dimension.
inline constexpr int kMaxDim = 2;

using Point = std::array<double, kMaxDim>;
using Translate = std::array<int, kMaxDim>;

inline Point point1(double x) { return {x, 0.0}; }
inline Translate translate1(int k) { return {k, 0}; }

/// Index lambda = (level j, translate k, orientation eps) of one mother
/// wavelet psi_lambda. The orientation is a bitmask over dimensions: bit d
/// set means the factor in dimension d is psi, clear means phi. It must be
/// nonzero (the all-phi tensor at level 0 is the father block).
struct WaveletIndex {
  int level = 0;
  Translate k{};
  unsigned orientation = 1;

  friend auto operator<=>(const WaveletIndex&, const WaveletIndex&) = default;
};

/// A compactly supported orthonormal wavelet pair (father phi, mother psi)
/// with values precomputed on a dyadic grid of step 2^-G.
///
/// Convention: the causal support [0, S] with S = 1 for Haar and S = 2N-1
/// for Daubechies-N. The recorded half-width A equals S, so that both
/// functions vanish outside the symmetric interval [-A, A]. Haar evaluates
/// exact step functions; Daubechies values come from the cascade iteration
/// with linear interpolation between grid points.
class WaveletBasis {
 public:
  /// Builds a basis. `family` is "haar" or "daubechies-N" (alias "dbN"),
  /// N in 2..10. `grid_exponent` G must lie in [6, 16].
  static WaveletBasis build(std::string_view family, int grid_exponent = 12);

  const std::string& family() const { return family_; }
  int grid_exponent() const { return grid_exponent_; }
  /// Causal support width S: phi and psi vanish outside [0, S].
  double support_width() const { return support_width_; }
  /// Half-width A of the enclosing symmetric interval [-A, A]; equals S.
  double support_halfwidth() const { return support_width_; }
  int regularity() const { return regularity_; }
  bool is_haar() const { return haar_; }

  const std::vector<double>& filter() const { return filter_; }
  const std::vector<double>& father_grid() const { return father_grid_; }
  const std::vector<double>& mother_grid() const { return mother_grid_; }

  /// phi(x): one-dimensional father factor. Zero outside [0, S).
  double father(double x) const;
  /// psi(x): one-dimensional mother factor. Zero outside [0, S).
  double mother(double x) const;

  double mother_sup_norm() const { return mother_sup_; }
  /// ||psi||_2 from grid quadrature (1 up to grid resolution).
  double mother_l2_norm() const { return mother_l2_; }

 private:
  WaveletBasis() = default;

  double eval_grid(const std::vector<double>& grid, double x) const;

  std::string family_;
  bool haar_ = false;
  int grid_exponent_ = 0;
  double support_width_ = 0;
  int regularity_ = 0;
  std::vector<double> filter_;
  std::vector<double> father_grid_;
  std::vector<double> mother_grid_;
  double mother_sup_ = 0;
  double mother_l2_ = 0;
};

/// psi_lambda(x) = 2^{D j / 2} prod_d w_d(2^j x_d - k_d), where w_d is psi
/// when the orientation bit for dimension d is set and phi otherwise.
/// Returns 0 outside the support.
double evaluate_mother(const WaveletBasis& basis, const WaveletIndex& index,
                       const Point& x, int dim);

/// phi_k(x) = prod_d phi(x_d - k_d): the level-0 father block.
double evaluate_father(const WaveletBasis& basis, const Translate& k,
                       const Point& x, int dim);

inline double evaluate_mother1(const WaveletBasis& basis, int level, int k,
                               double x) {
  return evaluate_mother(basis, WaveletIndex{level, translate1(k), 1},
                         point1(x), 1);
}
inline double evaluate_father1(const WaveletBasis& basis, int k, double x) {
  return evaluate_father(basis, translate1(k), point1(x), 1);
}

/// All mother indices at `level` whose support interior intersects
/// (-T, T)^D. The count grows as Theta(2^{D j}).
std::vector<WaveletIndex> active_indices(const WaveletBasis& basis, int level,
                                         double support_halfwidth, int dim);

/// Father translates k with supp(phi_k) interior intersecting (-T, T)^D.
std::vector<Translate> active_father_translates(const WaveletBasis& basis,
                                                double support_halfwidth,
                                                int dim);

/// Inclusive per-dimension translate range [lo, hi] at `level` for support
/// half-width T (used by both the index enumeration and the estimators).
std::pair<int, int> translate_range(const WaveletBasis& basis, int level,
                                    double support_halfwidth);

}  // namespace besovdens

#endif  // BESOVDENS_WAVELET_HPP_
