#ifndef BESOVDENS_EXPERIMENT_HPP_
#define BESOVDENS_EXPERIMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "besovdens/coefficients.hpp"
#include "besovdens/rates.hpp"
#include "besovdens/wavelet.hpp"

namespace besovdens {

/// Monte-Carlo convergence experiment. Truth densities are defined directly
/// in coefficient space (Haar basis), so the loss is evaluated against
/// exact truth coefficients.
struct ExperimentConfig {
  ProblemSpec problem;
  std::string truth = "dense-profile";  // | sparse-spike | uniform-perturbed
  std::vector<std::size_t> n_grid;
  int trials = 20;
  std::vector<std::string> estimators;  // "linear", "thresholded"
  std::vector<double> k_grid = {1.0};
  std::uint64_t seed = 1;
  int loss_jmax = 0;  // 0: derived as j1(n_max) + 2
  std::string output = "experiment";
};

ExperimentConfig config_from_json(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Named synthetic truth recipes on [-T, T] (T a positive integer), exact in
/// Haar coefficient space:
///  - dense-profile: uniform base plus all translates at levels 0..6 with
///    amplitude 0.25 * 2^{-j(sigma_g + 1/2)} and codebook signs;
///  - sparse-spike: uniform base plus one spike per level 0..9 at
///    0.4 * 2^{-j(sigma_g + 1/2 - 1/p_g)}, supports staggered disjointly;
///  - uniform-perturbed: uniform base plus a single level-3 wavelet.
CoefficientTree make_truth(const std::string& recipe,
                           const ProblemSpec& problem);

struct RateFitRow {
  std::string estimator;
  std::size_t n = 0;
  double mean_risk = 0;
  double stderr_of_mean = 0;
};

struct EstimatorSummary {
  std::string estimator;
  double slope = 0;
  double slope_se = 0;
  double theory_exponent = 0;
  Regime regime = Regime::kDense;
  bool pass = false;  // |slope + theory| <= tolerance
};

struct RateFitResult {
  std::vector<std::string> metadata;  // emitted as leading # comments
  std::vector<RateFitRow> rows;
  std::vector<EstimatorSummary> summaries;
  // Raw per-trial risks: [estimator][n index][trial].
  std::vector<std::vector<std::vector<double>>> risks;
  std::vector<std::string> estimator_names;
  std::vector<std::size_t> n_grid;
};

/// Runs the full harness: sample -> estimate -> coefficient-space IPM risk
/// against exact truth, slope fit, and theory comparison. Deterministic for
/// a given config and seed at any worker count (BESOVDENS_WORKERS).
RateFitResult run_convergence(const ExperimentConfig& config,
                              double slope_tolerance = 0.1);

struct ComparisonResult {
  RateFitResult fit;
  std::string linear_name;
  std::string thresholded_name;
  double slope_gap = 0;     // thresholded slope - linear slope
  double slope_gap_se = 0;  // joint standard error
  bool thresholded_slope_better = false;
  /// Bootstrap fraction of resamples with mean linear risk exceeding mean
  /// thresholded risk at the largest n.
  double bootstrap_thresholded_better = 0;
  double linear_risk_at_nmax = 0;
  double thresholded_risk_at_nmax = 0;
};

/// Side-by-side run of the linear and thresholded estimators on shared
/// samples. The config must list both estimators.
ComparisonResult compare_estimators(const ExperimentConfig& config);

void emit_report_csv(const RateFitResult& result, std::ostream& os);
void emit_report_svg(const RateFitResult& result, std::ostream& os);
/// Writes <output>.csv and <output>.svg.
void emit_report_files(const RateFitResult& result, const std::string& output);

}  // namespace besovdens

#endif  // BESOVDENS_EXPERIMENT_HPP_
