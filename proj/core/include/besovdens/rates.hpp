#ifndef BESOVDENS_RATES_HPP_
#define BESOVDENS_RATES_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace besovdens {

struct BallParams {
  double sigma = 0;
  double p = 2;
  double q = 2;
  double radius = 1;
};

/// Full problem instance: dimension, discriminator ball (the loss),
/// generator ball (the density class), support half-width, and optionally a
/// sample size.
struct ProblemSpec {
  int dim = 1;
  BallParams discriminator;
  BallParams generator;
  double support_halfwidth = 1.0;
  std::optional<std::uint64_t> n;
};

enum class Regime { kParametric, kDense, kSparse, kInfeasible };
std::string_view to_string(Regime regime);

/// Convergence-rate answer: risk decays as n^{-exponent} (the matching
/// bounds may carry polylog factors, flagged by log_factor). Hypothesis
/// flags record which theorem preconditions hold; the exponent is the
/// formula value regardless.
struct RateResult {
  double exponent = 0;
  Regime regime = Regime::kInfeasible;
  bool log_factor = false;
  bool hyp_smoothness = true;   // sigma_g >= D/p_g
  bool hyp_conjugate = true;    // p_d' >= p_g
  bool hyp_denominator = true;  // rate denominators positive
  double term_parametric = 0.5;
  double term_dense = 0;
  double term_sparse = 0;
  // Linear case only: sigma_g' with the sparse term equal to the dense
  // formula evaluated at sigma_g'.
  double effective_smoothness = 0;
};

/// Minimax exponent over all estimators:
/// alpha = min{ 1/2, (sg+sd)/(2sg+D), (sg+sd+D(1-1/pg-1/pd))/(2sg+D(1-2/pg)) }.
RateResult minimax_exponent(const ProblemSpec& spec);

struct LowerBounds {
  double dense = 0;
  double sparse = 0;
  bool sparse_has_log = true;  // sparse term scales as (log n / n)^sparse
};

/// Fano lower-bound exponents: dense (sg+sd)/(2sg+D) and sparse
/// (sg+sd+D-D/pg-D/pd)/(2sg+D-2D/pg).
LowerBounds lower_bound_exponents(const ProblemSpec& spec);

/// Best exponent achievable by linear estimators; the sparse term is
/// (sg+sd-D/pg+D/pd')/(2sg+D-2D/pg+2D/pd'), equivalently the dense formula
/// with sigma_g replaced by sigma_g' = sigma_g - D(1/pg + 1/pd - 1).
RateResult linear_exponent(const ProblemSpec& spec);

struct RegimeDiagnostics {
  Regime regime = Regime::kInfeasible;
  /// sigma_d + sigma_g - D(1/pd + 1/pg - 1); consistent estimation needs
  /// this positive when 1/pd + 1/pg > 1.
  double infeasible_margin = 0;
  /// term_dense - term_sparse: zero on the sparse/dense phase boundary.
  double dense_minus_sparse = 0;
  /// min(term_dense, term_sparse) - 1/2: nonnegative in the parametric
  /// regime.
  double parametric_margin = 0;
};

RegimeDiagnostics classify_regime(const ProblemSpec& spec);

enum class EstimatorClass { kGeneral, kLinear };

struct PhaseDiagram {
  int dim = 1;
  double p_d = 2;
  double p_g = 2;
  EstimatorClass estimator_class = EstimatorClass::kGeneral;
  std::vector<double> sigma_d;  // row axis
  std::vector<double> sigma_g;  // column axis
  std::vector<RateResult> cells;  // row-major: [i_sd * sigma_g.size() + i_sg]

  const RateResult& at(std::size_t i_sd, std::size_t i_sg) const {
    return cells[i_sd * sigma_g.size() + i_sg];
  }
};

/// Rate exponents and regimes on a (sigma_d, sigma_g) grid. Resolution is
/// the number of cells per axis (at most 2048). Cell centers sample the
/// open-ended ranges ( lo + (i+1/2) (hi-lo)/res ).
PhaseDiagram phase_diagram(int dim, double p_d, double p_g, double sd_lo,
                           double sd_hi, double sg_lo, double sg_hi,
                           int resolution, EstimatorClass estimator_class);

/// CSV with header `sigma_d,sigma_g,exponent,regime`.
void write_phase_csv(const PhaseDiagram& diagram, std::ostream& os);

/// SVG heat map of the exponent with regime-boundary polylines overlaid.
void write_phase_svg(const PhaseDiagram& diagram, std::ostream& os);

}  // namespace besovdens

#endif  // BESOVDENS_RATES_HPP_
