#include "besovdens/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "besovdens/adversarial.hpp"
#include "besovdens/besov.hpp"
#include "besovdens/estimator.hpp"
#include "besovdens/sampling.hpp"
#include "besovdens/stats.hpp"
#include "besovdens/transform.hpp"
#include "svg_util.hpp"

namespace besovdens {

namespace {

constexpr int kBasisGridExponent = 12;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

double json_exponent(const nlohmann::json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "Inf" || s == "infinity")
      return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("unrecognized exponent string: " + s);
  }
  return v.get<double>();
}

struct EstimatorInstance {
  std::string name;
  EstimatorKind kind = EstimatorKind::kLinear;
  double threshold_constant = 1.0;
};

std::vector<EstimatorInstance> expand_estimators(
    const ExperimentConfig& config) {
  std::vector<EstimatorInstance> out;
  for (const std::string& e : config.estimators) {
    if (e == "linear") {
      out.push_back({"linear", EstimatorKind::kLinear, 0.0});
    } else if (e == "thresholded") {
      if (config.k_grid.empty())
        throw std::invalid_argument("thresholded estimator needs a K grid");
      for (double K : config.k_grid) {
        std::string name = "thresholded";
        if (config.k_grid.size() > 1) {
          char buf[48];
          std::snprintf(buf, sizeof(buf), "thresholded[K=%g]", K);
          name = buf;
        }
        out.push_back({name, EstimatorKind::kThresholded, K});
      }
    } else {
      throw std::invalid_argument("unknown estimator: " + e);
    }
  }
  if (out.empty()) throw std::invalid_argument("no estimators configured");
  return out;
}

void validate(const ExperimentConfig& config) {
  if (config.trials < 10)
    throw std::invalid_argument("need at least 10 trials per sample size");
  if (config.n_grid.size() < 3)
    throw std::invalid_argument("n grid needs at least 3 points");
  for (std::size_t i = 1; i < config.n_grid.size(); ++i)
    if (config.n_grid[i] <= config.n_grid[i - 1])
      throw std::invalid_argument("n grid must be strictly increasing");
  if (config.problem.dim != 1)
    throw std::invalid_argument("the harness runs 1-D experiments");
}

int worker_count() {
  if (const char* env = std::getenv("BESOVDENS_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

int derive_loss_jmax(const ExperimentConfig& config) {
  if (config.loss_jmax > 0) return config.loss_jmax;
  const auto schedule = default_levels(config.n_grid.back(),
                                       config.problem.generator.sigma,
                                       config.problem.generator.p,
                                       config.problem.dim);
  return schedule.j1 + 2;
}

}  // namespace

CoefficientTree make_truth(const std::string& recipe,
                           const ProblemSpec& problem) {
  if (problem.dim != 1)
    throw std::invalid_argument("truth recipes are 1-D");
  const double T = problem.support_halfwidth;
  const int Ti = static_cast<int>(std::llround(T));
  if (Ti < 1 || std::abs(T - Ti) > 0)
    throw std::invalid_argument(
        "truth recipes need an integer support half-width");

  CoefficientTree tree(1);
  const double base = 1.0 / (2.0 * T);
  for (int k = -Ti; k < Ti; ++k) tree.set_father1(k, base);

  const double sg = problem.generator.sigma;
  if (recipe == "uniform-perturbed") {
    tree.set_mother1(3, 2, 0.1);
    return tree;
  }
  if (recipe == "dense-profile") {
    const int levels = 6;
    for (int j = 0; j <= levels; ++j) {
      const double amp = 0.25 * std::exp2(-j * (sg + 0.5));
      const int lo = -Ti << j;
      const int hi = (Ti << j) - 1;
      const int m = hi - lo + 1;
      std::vector<std::uint8_t> signs;
      if (m >= 8) {
        const auto words = vg_codebook(m);
        signs = words.size() > 1 ? words[1] : words[0];
      } else {
        signs.resize(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i)
          signs[static_cast<std::size_t>(i)] =
              static_cast<std::uint8_t>(i & 1);
      }
      for (int k = lo; k <= hi; ++k) {
        const double s = signs[static_cast<std::size_t>(k - lo)] ? 1.0 : -1.0;
        tree.set_mother1(j, k, s * amp);
      }
    }
    return tree;
  }
  if (recipe == "sparse-spike") {
    const int levels = 9;
    const double amp0 = 0.4 * base / 0.5;
    for (int j = 0; j <= levels; ++j) {
      const double amp =
          amp0 * std::exp2(-j * (sg + 0.5 - inv(problem.generator.p)));
      // Staggered supports: level 0 at [-1, 0), level j >= 1 at
      // [1 - 2^{1-j}, 1 - 2^{-j}).
      const int k = j == 0 ? -1 : (1 << j) - 2;
      tree.set_mother1(j, k, amp);
    }
    return tree;
  }
  throw std::invalid_argument("unknown truth recipe: " + recipe);
}

ExperimentConfig config_from_json(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentConfig c;
  const auto& p = j.at("problem");
  c.problem.dim = p.value("dim", 1);
  c.problem.discriminator.sigma = p.at("sigma_d").get<double>();
  c.problem.discriminator.p = json_exponent(p.at("p_d"));
  c.problem.discriminator.q = json_exponent(p.at("q_d"));
  c.problem.discriminator.radius = p.value("L_d", 1.0);
  c.problem.generator.sigma = p.at("sigma_g").get<double>();
  c.problem.generator.p = json_exponent(p.at("p_g"));
  c.problem.generator.q = json_exponent(p.at("q_g"));
  c.problem.generator.radius = p.value("L_g", 1.0);
  c.problem.support_halfwidth = p.value("support_halfwidth", 1.0);
  if (p.contains("n")) c.problem.n = p.at("n").get<std::uint64_t>();

  c.truth = j.value("truth", std::string("dense-profile"));
  c.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
  c.trials = j.at("trials").get<int>();
  c.estimators = j.at("estimators").get<std::vector<std::string>>();
  if (j.contains("k_grid"))
    c.k_grid = j.at("k_grid").get<std::vector<double>>();
  c.seed = j.value("seed", std::uint64_t{1});
  c.loss_jmax = j.value("loss_jmax", 0);
  c.output = j.value("output", std::string("experiment"));
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return config_from_json(buf.str());
}

RateFitResult run_convergence(const ExperimentConfig& config,
                              double slope_tolerance) {
  validate(config);
  const auto instances = expand_estimators(config);
  const WaveletBasis basis = WaveletBasis::build("haar", kBasisGridExponent);
  const CoefficientTree truth = make_truth(config.truth, config.problem);
  const TabulatedDensity density =
      tabulate(truth, basis, config.problem.support_halfwidth,
               kBasisGridExponent);

  const int loss_jmax = derive_loss_jmax(config);
  const CoefficientTree truth_loss = truth.truncated(loss_jmax);
  const BesovBall loss_ball{config.problem.discriminator.sigma,
                            config.problem.discriminator.p,
                            config.problem.discriminator.q,
                            config.problem.discriminator.radius,
                            config.problem.dim};

  // Per-(estimator, n): level schedules fixed up front.
  struct Levels {
    int j0, j1;
  };
  std::vector<std::vector<Levels>> schedule(instances.size());
  for (std::size_t e = 0; e < instances.size(); ++e) {
    schedule[e].resize(config.n_grid.size());
    for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
      const std::size_t n = config.n_grid[i];
      if (instances[e].kind == EstimatorKind::kLinear) {
        const int j0 = linear_optimal_level(
            n, config.problem.generator.sigma, config.problem.generator.p,
            config.problem.discriminator.p, config.problem.dim);
        schedule[e][i] = {j0, j0};
      } else {
        const auto s =
            default_levels(n, config.problem.generator.sigma,
                           config.problem.generator.p, config.problem.dim);
        schedule[e][i] = {s.j0, s.j1};
      }
    }
  }

  RateFitResult result;
  result.estimator_names.reserve(instances.size());
  for (const auto& inst : instances) result.estimator_names.push_back(inst.name);
  result.n_grid = config.n_grid;
  result.risks.assign(
      instances.size(),
      std::vector<std::vector<double>>(
          config.n_grid.size(),
          std::vector<double>(static_cast<std::size_t>(config.trials), 0.0)));

  // Trials are the unit of parallelism; samples are shared by estimators
  // within a (n, trial) task so comparisons are paired.
  const std::size_t tasks =
      config.n_grid.size() * static_cast<std::size_t>(config.trials);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= tasks || failed.load()) break;
      const std::size_t i = task / static_cast<std::size_t>(config.trials);
      const std::size_t t = task % static_cast<std::size_t>(config.trials);
      const std::size_t n = config.n_grid[i];
      try {
        const std::uint64_t stream =
            derive_stream_seed(config.seed, n, t);
        const std::vector<double> xs = sample(density, n, stream);
        for (std::size_t e = 0; e < instances.size(); ++e) {
          EstimatorConfig ec;
          ec.kind = instances[e].kind;
          ec.j0 = schedule[e][i].j0;
          ec.j1 = schedule[e][i].j1;
          ec.threshold_constant = instances[e].threshold_constant;
          ec.support_halfwidth = config.problem.support_halfwidth;
          const CoefficientTree estimate =
              instances[e].kind == EstimatorKind::kLinear
                  ? linear_estimate(xs, basis, ec)
                  : threshold_estimate(xs, basis, ec);
          const CoefficientTree diff =
              truth_loss - estimate.truncated(loss_jmax);
          result.risks[e][i][t] = dual_ipm(diff, loss_ball);
        }
      } catch (const std::exception& ex) {
        std::lock_guard<std::mutex> lock(error_mutex);
        error_message = ex.what();
        failed.store(true);
        break;
      }
    }
  };

  const int workers =
      static_cast<int>(std::min<std::size_t>(tasks,
                                             static_cast<std::size_t>(
                                                 worker_count())));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw std::runtime_error(error_message);

  // Deterministic aggregation in (estimator, n) order.
  std::vector<double> ns;
  for (std::size_t n : config.n_grid) ns.push_back(static_cast<double>(n));
  for (std::size_t e = 0; e < instances.size(); ++e) {
    std::vector<double> means;
    for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
      const MeanStderr ms = mean_stderr(result.risks[e][i]);
      result.rows.push_back(
          {instances[e].name, config.n_grid[i], ms.mean, ms.stderr_of_mean});
      means.push_back(ms.mean);
    }
    const SlopeFit fit = fit_loglog_slope(ns, means);
    const RateResult theory = instances[e].kind == EstimatorKind::kLinear
                                  ? linear_exponent(config.problem)
                                  : minimax_exponent(config.problem);
    EstimatorSummary s;
    s.estimator = instances[e].name;
    s.slope = fit.slope;
    s.slope_se = fit.slope_se;
    s.theory_exponent = theory.exponent;
    s.regime = theory.regime;
    s.pass = std::abs(fit.slope + theory.exponent) <= slope_tolerance;
    result.summaries.push_back(s);
  }

  result.metadata.push_back("truth=" + config.truth);
  result.metadata.push_back("seed=" + std::to_string(config.seed));
  result.metadata.push_back("trials=" + std::to_string(config.trials));
  const double tail_exponent =
      config.problem.discriminator.sigma + config.problem.generator.sigma -
      std::max(0.0,
               config.problem.dim * inv(config.problem.generator.p) -
                   config.problem.dim *
                       inv(conjugate_exponent(config.problem.discriminator.p)));
  const double tail_bound = config.problem.discriminator.radius *
                            config.problem.generator.radius *
                            std::exp2(-loss_jmax * tail_exponent);
  result.metadata.push_back("loss_jmax=" + std::to_string(loss_jmax) +
                            " tail_bound_exponent=" + fmt(tail_exponent) +
                            " tail_bound=" + fmt(tail_bound));
  result.metadata.push_back(
      "note=risk at fixed truths lower-bounds the minimax supremum over the "
      "generator ball");
  return result;
}

ComparisonResult compare_estimators(const ExperimentConfig& config) {
  const auto instances = expand_estimators(config);
  bool has_linear = false, has_thresh = false;
  for (const auto& inst : instances) {
    has_linear |= inst.kind == EstimatorKind::kLinear;
    has_thresh |= inst.kind == EstimatorKind::kThresholded;
  }
  if (!has_linear || !has_thresh)
    throw std::invalid_argument(
        "comparison needs both the linear and the thresholded estimator");

  ComparisonResult cmp;
  cmp.fit = run_convergence(config);

  std::size_t li = 0, ti = 0;
  for (std::size_t e = 0; e < instances.size(); ++e) {
    if (instances[e].kind == EstimatorKind::kLinear) li = e;
  }
  for (std::size_t e = 0; e < instances.size(); ++e) {
    if (instances[e].kind == EstimatorKind::kThresholded) {
      ti = e;
      break;
    }
  }
  cmp.linear_name = instances[li].name;
  cmp.thresholded_name = instances[ti].name;
  const EstimatorSummary& sl = cmp.fit.summaries[li];
  const EstimatorSummary& st = cmp.fit.summaries[ti];
  cmp.slope_gap = st.slope - sl.slope;
  cmp.slope_gap_se =
      std::sqrt(sl.slope_se * sl.slope_se + st.slope_se * st.slope_se);
  cmp.thresholded_slope_better = (sl.slope - st.slope) > cmp.slope_gap_se;

  const std::size_t last = config.n_grid.size() - 1;
  cmp.linear_risk_at_nmax = mean_stderr(cmp.fit.risks[li][last]).mean;
  cmp.thresholded_risk_at_nmax = mean_stderr(cmp.fit.risks[ti][last]).mean;
  cmp.bootstrap_thresholded_better = bootstrap_fraction_greater(
      cmp.fit.risks[li][last], cmp.fit.risks[ti][last], 4000,
      config.seed ^ 0xB007C0DEull);
  return cmp;
}

void emit_report_csv(const RateFitResult& result, std::ostream& os) {
  for (const std::string& line : result.metadata) os << "# " << line << "\n";
  os << "estimator,n,mean_risk,stderr,slope,slope_se,theory_exponent,regime,"
        "pass\n";
  for (const RateFitRow& row : result.rows)
    os << row.estimator << ',' << row.n << ',' << fmt(row.mean_risk) << ','
       << fmt(row.stderr_of_mean) << ",,,,,\n";
  for (const EstimatorSummary& s : result.summaries)
    os << s.estimator << ",,,," << fmt(s.slope) << ',' << fmt(s.slope_se)
       << ',' << fmt(s.theory_exponent) << ',' << to_string(s.regime) << ','
       << (s.pass ? 1 : 0) << "\n";
}

void emit_report_svg(const RateFitResult& result, std::ostream& os) {
  const double margin = 56;
  const double plot_w = 560, plot_h = 420;
  const double width = plot_w + 2 * margin;
  const double height = plot_h + 2 * margin;

  double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
  for (const RateFitRow& row : result.rows) {
    const double x = std::log2(static_cast<double>(row.n));
    const double y = std::log2(std::max(row.mean_risk, 1e-300));
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
    y_lo = std::min(y_lo, y);
    y_hi = std::max(y_hi, y);
  }
  if (y_hi <= y_lo) y_hi = y_lo + 1;
  if (x_hi <= x_lo) x_hi = x_lo + 1;
  y_lo -= 0.5;
  y_hi += 0.5;
  auto px = [&](double x) {
    return margin + (x - x_lo) / (x_hi - x_lo) * plot_w;
  };
  auto py = [&](double y) {
    return margin + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;
  };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};
  svg::begin(os, width, height);
  svg::rect(os, 0, 0, width, height, "#ffffff");
  svg::line(os, margin, margin, margin, margin + plot_h, "#000000", 1.0);
  svg::line(os, margin, margin + plot_h, margin + plot_w, margin + plot_h,
            "#000000", 1.0);
  svg::text(os, margin + plot_w / 2 - 20, height - 16, "log2 n");
  svg::text(os, 4, margin - 8, "log2 risk");

  for (std::size_t e = 0; e < result.estimator_names.size(); ++e) {
    const std::string& name = result.estimator_names[e];
    const std::string color = palette[e % 6];
    std::vector<std::pair<double, double>> pts;
    double x0 = 0, y0 = 0;
    bool first = true;
    for (const RateFitRow& row : result.rows) {
      if (row.estimator != name) continue;
      const double x = std::log2(static_cast<double>(row.n));
      const double y = std::log2(std::max(row.mean_risk, 1e-300));
      if (first) {
        x0 = x;
        y0 = y;
        first = false;
      }
      pts.emplace_back(px(x), py(y));
    }
    svg::polyline(os, pts, color, 2.0);
    // Dashed reference line with the theoretical slope.
    const double alpha = result.summaries[e].theory_exponent;
    std::vector<std::pair<double, double>> ref = {
        {px(x0), py(y0)}, {px(x_hi), py(y0 - alpha * (x_hi - x0))}};
    svg::polyline(os, ref, color, 1.0, /*dashed=*/true);
    svg::text(os, margin + 8, margin + 16 + 16 * static_cast<double>(e),
              name + " (theory " + svg::num(alpha) + ")");
  }
  svg::end(os);
}

void emit_report_files(const RateFitResult& result,
                       const std::string& output) {
  const std::filesystem::path parent =
      std::filesystem::path(output).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  {
    std::ofstream os(output + ".csv", std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + output + ".csv");
    emit_report_csv(result, os);
  }
  {
    std::ofstream os(output + ".svg", std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + output + ".svg");
    emit_report_svg(result, os);
  }
}

}  // namespace besovdens
