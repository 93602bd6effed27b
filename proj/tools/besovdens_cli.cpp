// Command line front end: rate queries, phase diagrams, estimation from
// sample files, Monte-Carlo experiments, and adversarial-instance audits.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "besovdens/adversarial.hpp"
#include "besovdens/besov.hpp"
#include "besovdens/estimator.hpp"
#include "besovdens/experiment.hpp"
#include "besovdens/rates.hpp"
#include "besovdens/sampling.hpp"
#include "besovdens/transform.hpp"

namespace {

using namespace besovdens;

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "infinity")
    return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct BallOptions {
  std::string sigma = "0";
  std::string p = "2";
  std::string q = "2";
  double radius = 1.0;

  BallParams params() const {
    return BallParams{parse_exponent(sigma), parse_exponent(p),
                      parse_exponent(q), radius};
  }
};

void add_ball_options(CLI::App* cmd, const std::string& tag,
                      BallOptions& opts) {
  cmd->add_option("--sigma-" + tag, opts.sigma);
  cmd->add_option("--p-" + tag, opts.p);
  cmd->add_option("--q-" + tag, opts.q);
  cmd->add_option("--L-" + tag, opts.radius);
}

std::vector<double> read_samples(const std::string& path) {
  std::istream* in = &std::cin;
  std::ifstream file;
  if (path != "-") {
    file.open(path);
    if (!file) throw std::runtime_error("cannot open samples: " + path);
    in = &file;
  }
  std::vector<double> xs;
  std::string line;
  while (std::getline(*in, line)) {
    if (line.empty() || line[0] == '#') continue;
    xs.push_back(std::stod(line));
  }
  return xs;
}

int run_rate(int dim, const BallOptions& d, const BallOptions& g) {
  ProblemSpec spec;
  spec.dim = dim;
  spec.discriminator = d.params();
  spec.generator = g.params();
  const RateResult general = minimax_exponent(spec);
  const RateResult linear = linear_exponent(spec);
  const RegimeDiagnostics diag = classify_regime(spec);

  std::cout << "general exponent=" << fmt(general.exponent)
            << " regime=" << to_string(diag.regime)
            << " terms=[" << fmt(general.term_parametric) << ","
            << fmt(general.term_dense) << "," << fmt(general.term_sparse)
            << "]"
            << (general.log_factor ? " polylog" : "") << "\n";
  std::cout << "linear exponent=" << fmt(linear.exponent)
            << " regime=" << to_string(linear.regime)
            << " effective_smoothness=" << fmt(linear.effective_smoothness)
            << "\n";
  try {
    const LowerBounds lb = lower_bound_exponents(spec);
    std::cout << "lower_bounds dense=" << fmt(lb.dense)
              << " sparse=" << fmt(lb.sparse)
              << (lb.sparse_has_log ? " (sparse carries log n / n)" : "")
              << "\n";
  } catch (const std::exception& e) {
    std::cout << "lower_bounds unavailable: " << e.what() << "\n";
  }
  std::cout << "diagnostics infeasible_margin=" << fmt(diag.infeasible_margin)
            << " dense_minus_sparse=" << fmt(diag.dense_minus_sparse)
            << " parametric_margin=" << fmt(diag.parametric_margin) << "\n";
  std::cout << "hypotheses smoothness=" << general.hyp_smoothness
            << " conjugate=" << general.hyp_conjugate
            << " denominator=" << general.hyp_denominator << "\n";
  return 0;
}

int run_phase_diagram(int dim, const std::string& pd, const std::string& pg,
                      double sd_lo, double sd_hi, double sg_lo, double sg_hi,
                      int resolution, const std::string& cls,
                      const std::string& csv_path,
                      const std::string& svg_path) {
  const EstimatorClass klass =
      cls == "linear" ? EstimatorClass::kLinear : EstimatorClass::kGeneral;
  const PhaseDiagram diagram =
      phase_diagram(dim, parse_exponent(pd), parse_exponent(pg), sd_lo, sd_hi,
                    sg_lo, sg_hi, resolution, klass);
  if (csv_path == "-") {
    write_phase_csv(diagram, std::cout);
  } else {
    std::ofstream os(csv_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + csv_path);
    write_phase_csv(diagram, os);
  }
  if (!svg_path.empty()) {
    std::ofstream os(svg_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + svg_path);
    write_phase_svg(diagram, os);
  }
  return 0;
}

int run_estimate(const std::string& input, const std::string& family, int G,
                 double T, const std::string& kind, int j0, int j1, double K,
                 const std::string& sigma_g, const std::string& p_g,
                 const std::string& p_d, bool normalize,
                 const std::string& out) {
  const WaveletBasis basis = WaveletBasis::build(family, G);
  const std::vector<double> xs = read_samples(input);
  if (xs.empty()) throw std::runtime_error("no samples read");

  EstimatorConfig cfg;
  cfg.support_halfwidth = T;
  cfg.threshold_constant = K;
  if (kind == "linear") {
    cfg.kind = EstimatorKind::kLinear;
    cfg.j0 = j0 >= 0 ? j0
                     : linear_optimal_level(xs.size(), parse_exponent(sigma_g),
                                            parse_exponent(p_g),
                                            parse_exponent(p_d), 1);
  } else if (kind == "thresholded") {
    cfg.kind = EstimatorKind::kThresholded;
    if (j0 >= 0 && j1 >= 0) {
      cfg.j0 = j0;
      cfg.j1 = j1;
    } else {
      const LevelSchedule s = default_levels(
          xs.size(), parse_exponent(sigma_g), parse_exponent(p_g), 1);
      cfg.j0 = j0 >= 0 ? j0 : s.j0;
      cfg.j1 = j1 >= 0 ? j1 : s.j1;
    }
  } else {
    throw std::runtime_error("unknown estimator kind: " + kind);
  }

  CoefficientTree tree = cfg.kind == EstimatorKind::kLinear
                             ? linear_estimate(xs, basis, cfg)
                             : threshold_estimate(xs, basis, cfg);
  if (normalize) {
    const double mass = tree.mass();
    if (mass != 0.0) tree *= 1.0 / mass;
  }
  if (out == "-") {
    std::cout << to_text(tree);
  } else {
    save_tree(tree, out);
  }
  return 0;
}

int run_experiment(const std::string& config_path, std::int64_t seed,
                   bool compare) {
  ExperimentConfig config = load_config(config_path);
  if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
  if (compare) {
    const ComparisonResult cmp = compare_estimators(config);
    emit_report_files(cmp.fit, config.output);
    std::cout << "linear_risk_at_nmax=" << fmt(cmp.linear_risk_at_nmax)
              << " thresholded_risk_at_nmax="
              << fmt(cmp.thresholded_risk_at_nmax) << "\n";
    std::cout << "slope_gap=" << fmt(cmp.slope_gap)
              << " joint_se=" << fmt(cmp.slope_gap_se)
              << " thresholded_slope_better="
              << cmp.thresholded_slope_better << "\n";
    std::cout << "bootstrap_thresholded_better="
              << fmt(cmp.bootstrap_thresholded_better) << "\n";
  } else {
    const RateFitResult result = run_convergence(config);
    emit_report_files(result, config.output);
    for (const EstimatorSummary& s : result.summaries)
      std::cout << s.estimator << " slope=" << fmt(s.slope) << " se="
                << fmt(s.slope_se) << " theory=" << fmt(-s.theory_exponent)
                << " regime=" << to_string(s.regime)
                << " pass=" << (s.pass ? 1 : 0) << "\n";
  }
  std::cout << "wrote " << config.output << ".csv and " << config.output
            << ".svg\n";
  return 0;
}

int run_adversarial(const std::string& kind, int level, std::uint64_t n,
                    const std::string& family, int G, int dim,
                    const BallOptions& d, const BallOptions& g,
                    const std::string& out) {
  const WaveletBasis basis = WaveletBasis::build(family, G);
  ProblemSpec spec;
  spec.dim = dim;
  spec.discriminator = d.params();
  spec.generator = g.params();
  spec.n = n;
  const AdversarialFamily fam = kind == "dense"
                                    ? dense_family(level, spec, basis)
                                    : sparse_family(level, spec, basis);

  std::ostringstream os;
  os << "# kind=" << kind << " level=" << level << " n=" << n
     << " members=" << fam.size() << " c_g=" << fmt(fam.amplitude_g)
     << " c_d=" << fmt(fam.amplitude_d) << "\n";
  os << "record,i,j,besov_norm,mass,min_value,kl_per_sample,fano_ok,"
        "separation\n";
  bool ok = supports_disjoint(fam);
  if (!ok) os << "# FAIL: perturbation supports overlap\n";
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const MemberAudit a = audit_member(fam, i, n);
    os << "member," << i << ",," << fmt(a.besov_norm) << ',' << fmt(a.mass)
       << ',' << fmt(a.min_value) << ',' << fmt(a.kl_per_sample) << ','
       << (a.fano_ok ? 1 : 0) << ",\n";
    ok = ok && a.in_ball && a.nonnegative && a.unit_mass && a.fano_ok;
  }
  const BesovBall ball{spec.discriminator.sigma, spec.discriminator.p,
                       spec.discriminator.q, spec.discriminator.radius, dim};
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const CoefficientTree ti = fam.perturbation_tree(i);
    for (std::size_t j = i + 1; j < fam.size(); ++j) {
      const double sep = dual_ipm(ti - fam.perturbation_tree(j), ball);
      os << "pair," << i << ',' << j << ",,,,,," << fmt(sep) << "\n";
    }
  }
  if (ok && fam.size() >= 2)
    os << "# fano_bound=" << fmt(fano_bound(fam, n)) << "\n";

  if (out == "-") {
    std::cout << os.str();
  } else {
    std::ofstream file(out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + out);
    file << os.str();
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Wavelet density estimation under Besov IPM losses: rates, "
      "estimators, adversarial audits, and convergence experiments"};
  app.require_subcommand(1);

  // rate
  int dim = 1;
  BallOptions dopts, gopts;
  auto* rate = app.add_subcommand("rate", "Minimax exponent and regime");
  rate->add_option("--dim", dim);
  add_ball_options(rate, "d", dopts);
  add_ball_options(rate, "g", gopts);

  // phase-diagram
  int pd_dim = 4, resolution = 200;
  std::string pd_pd = "1.2", pd_pg = "2", pd_class = "general";
  double sd_lo = 0, sd_hi = 3, sg_lo = 0, sg_hi = 3;
  std::string pd_csv = "-", pd_svg;
  auto* pd = app.add_subcommand("phase-diagram",
                                "Exponent/regime grid as CSV and SVG");
  pd->add_option("--dim", pd_dim);
  pd->add_option("--p-d", pd_pd);
  pd->add_option("--p-g", pd_pg);
  pd->add_option("--sigma-d-min", sd_lo);
  pd->add_option("--sigma-d-max", sd_hi);
  pd->add_option("--sigma-g-min", sg_lo);
  pd->add_option("--sigma-g-max", sg_hi);
  pd->add_option("--resolution", resolution);
  pd->add_option("--class", pd_class)
      ->check(CLI::IsMember({"general", "linear"}));
  pd->add_option("--csv", pd_csv);
  pd->add_option("--svg", pd_svg);

  // estimate
  std::string est_input = "-", est_family = "haar", est_kind = "thresholded";
  std::string est_sigma_g = "2", est_p_g = "2", est_p_d = "2";
  std::string est_out = "-";
  int est_G = 12, est_j0 = -1, est_j1 = -1;
  double est_T = 1.0, est_K = 1.0;
  bool est_normalize = false;
  auto* est = app.add_subcommand(
      "estimate", "Wavelet density estimate from a sample file");
  est->add_option("--input", est_input, "samples, one per line ('-' stdin)");
  est->add_option("--basis", est_family);
  est->add_option("--grid-exponent", est_G);
  est->add_option("--support", est_T);
  est->add_option("--kind", est_kind)
      ->check(CLI::IsMember({"linear", "thresholded"}));
  est->add_option("--j0", est_j0);
  est->add_option("--j1", est_j1);
  est->add_option("--K", est_K);
  est->add_option("--sigma-g", est_sigma_g);
  est->add_option("--p-g", est_p_g);
  est->add_option("--p-d", est_p_d);
  est->add_flag("--normalize", est_normalize,
                "rescale to unit mass for density export");
  est->add_option("--out", est_out);

  // experiment
  std::string exp_config;
  std::int64_t exp_seed = -1;
  bool exp_compare = false;
  auto* exp = app.add_subcommand("experiment",
                                 "Monte-Carlo convergence experiment");
  exp->add_option("--config", exp_config)->required();
  exp->add_option("--seed", exp_seed, "override the config seed");
  exp->add_flag("--compare", exp_compare,
                "side-by-side linear vs thresholded comparison");

  // adversarial
  std::string adv_kind = "sparse", adv_family = "haar", adv_out = "-";
  int adv_level = 3, adv_G = 12, adv_dim = 1;
  std::uint64_t adv_n = 1024;
  BallOptions adv_d, adv_g;
  adv_d.sigma = "0.5";
  adv_g.sigma = "0.8";
  adv_g.radius = 2.0;
  auto* adv = app.add_subcommand(
      "adversarial", "Audit a Fano lower-bound instance family");
  adv->add_option("--family", adv_kind)
      ->check(CLI::IsMember({"sparse", "dense"}));
  adv->add_option("--level", adv_level);
  adv->add_option("--n", adv_n);
  adv->add_option("--basis", adv_family);
  adv->add_option("--grid-exponent", adv_G);
  adv->add_option("--dim", adv_dim);
  add_ball_options(adv, "d", adv_d);
  add_ball_options(adv, "g", adv_g);
  adv->add_option("--out", adv_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (rate->parsed()) return run_rate(dim, dopts, gopts);
    if (pd->parsed())
      return run_phase_diagram(pd_dim, pd_pd, pd_pg, sd_lo, sd_hi, sg_lo,
                               sg_hi, resolution, pd_class, pd_csv, pd_svg);
    if (est->parsed())
      return run_estimate(est_input, est_family, est_G, est_T, est_kind,
                          est_j0, est_j1, est_K, est_sigma_g, est_p_g,
                          est_p_d, est_normalize, est_out);
    if (exp->parsed()) return run_experiment(exp_config, exp_seed, exp_compare);
    if (adv->parsed())
      return run_adversarial(adv_kind, adv_level, adv_n, adv_family, adv_G,
                             adv_dim, adv_d, adv_g, adv_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
