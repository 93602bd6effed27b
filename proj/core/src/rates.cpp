#include "besovdens/rates.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "besovdens/besov.hpp"
#include "svg_util.hpp"

namespace besovdens {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

struct Terms {
  double parametric = 0.5;
  double dense = 0;
  double sparse = 0;  // +inf when the denominator degenerates
  bool denominator_ok = true;
};

Terms general_terms(const ProblemSpec& s) {
  const double sg = s.generator.sigma;
  const double sd = s.discriminator.sigma;
  const double D = s.dim;
  Terms t;
  t.dense = (sg + sd) / (2 * sg + D);
  const double den = 2 * sg + D * (1 - 2 * inv(s.generator.p));
  if (den <= 0) {
    t.denominator_ok = false;
    t.sparse = kInf;
  } else {
    t.sparse =
        (sg + sd + D * (1 - inv(s.generator.p) - inv(s.discriminator.p))) /
        den;
  }
  return t;
}

Terms linear_terms(const ProblemSpec& s) {
  const double sg = s.generator.sigma;
  const double sd = s.discriminator.sigma;
  const double D = s.dim;
  const double ipdc = inv(conjugate_exponent(s.discriminator.p));
  const double ipg = inv(s.generator.p);
  Terms t;
  t.dense = (sg + sd) / (2 * sg + D);
  const double den = 2 * sg + D - 2 * D * ipg + 2 * D * ipdc;
  if (den <= 0) {
    t.denominator_ok = false;
    t.sparse = kInf;
  } else {
    t.sparse = (sg + sd - D * ipg + D * ipdc) / den;
  }
  return t;
}

// Ties resolved Parametric > Dense > Sparse.
Regime regime_from_terms(double alpha, const Terms& t) {
  if (alpha <= 0) return Regime::kInfeasible;
  if (alpha == t.parametric) return Regime::kParametric;
  if (alpha == t.dense) return Regime::kDense;
  return Regime::kSparse;
}

void fill_hypotheses(const ProblemSpec& s, RateResult& r) {
  const double D = s.dim;
  r.hyp_smoothness = s.generator.sigma >= D * inv(s.generator.p);
  r.hyp_conjugate =
      conjugate_exponent(s.discriminator.p) >= s.generator.p;
}

// Linear estimators additionally need sigma_d + sigma_g > D(1/pd + 1/pg).
bool linear_smoothness_infeasible(const ProblemSpec& s) {
  const double total = s.discriminator.sigma + s.generator.sigma;
  return total <=
         s.dim * (inv(s.discriminator.p) + inv(s.generator.p));
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::kParametric:
      return "Parametric";
    case Regime::kDense:
      return "Dense";
    case Regime::kSparse:
      return "Sparse";
    case Regime::kInfeasible:
      return "Infeasible";
  }
  return "Unknown";
}

RateResult minimax_exponent(const ProblemSpec& spec) {
  const Terms t = general_terms(spec);
  RateResult r;
  r.term_parametric = t.parametric;
  r.term_dense = t.dense;
  r.term_sparse = t.sparse;
  r.hyp_denominator = t.denominator_ok;
  fill_hypotheses(spec, r);
  r.exponent = std::min(t.parametric, std::min(t.dense, t.sparse));
  r.regime = regime_from_terms(r.exponent, t);
  // The matching upper bound (thresholding) carries sqrt(log n) off the
  // parametric branch.
  r.log_factor = r.regime == Regime::kDense || r.regime == Regime::kSparse;
  r.effective_smoothness = std::numeric_limits<double>::quiet_NaN();
  return r;
}

LowerBounds lower_bound_exponents(const ProblemSpec& spec) {
  const double sg = spec.generator.sigma;
  const double sd = spec.discriminator.sigma;
  const double D = spec.dim;
  const double den = 2 * sg + D - 2 * D * inv(spec.generator.p);
  if (den <= 0)
    throw std::invalid_argument(
        "lower bound requires 2 sigma_g + D - 2D/p_g > 0");
  LowerBounds lb;
  lb.dense = (sg + sd) / (2 * sg + D);
  lb.sparse =
      (sg + sd + D - D * inv(spec.generator.p) - D * inv(spec.discriminator.p)) /
      den;
  lb.sparse_has_log = true;
  return lb;
}

RateResult linear_exponent(const ProblemSpec& spec) {
  const Terms t = linear_terms(spec);
  RateResult r;
  r.term_parametric = t.parametric;
  r.term_dense = t.dense;
  r.term_sparse = t.sparse;
  r.hyp_denominator = t.denominator_ok;
  fill_hypotheses(spec, r);
  r.exponent = std::min(t.parametric, std::min(t.dense, t.sparse));
  r.regime = regime_from_terms(r.exponent, t);
  if (linear_smoothness_infeasible(spec)) r.regime = Regime::kInfeasible;
  r.log_factor = r.regime == Regime::kDense || r.regime == Regime::kSparse;
  r.effective_smoothness =
      spec.generator.sigma -
      spec.dim *
          (inv(spec.generator.p) + inv(spec.discriminator.p) - 1.0);
  return r;
}

RegimeDiagnostics classify_regime(const ProblemSpec& spec) {
  const Terms t = general_terms(spec);
  const double D = spec.dim;
  const double total = spec.discriminator.sigma + spec.generator.sigma;
  const double deficiency =
      inv(spec.discriminator.p) + inv(spec.generator.p) - 1.0;

  RegimeDiagnostics d;
  d.infeasible_margin = total - D * deficiency;
  d.dense_minus_sparse = t.dense - t.sparse;
  d.parametric_margin = std::min(t.dense, t.sparse) - 0.5;

  const double alpha = std::min(t.parametric, std::min(t.dense, t.sparse));
  if ((deficiency > 0 && d.infeasible_margin <= 0) || alpha <= 0) {
    d.regime = Regime::kInfeasible;
    return d;
  }
  d.regime = regime_from_terms(alpha, t);
  return d;
}

PhaseDiagram phase_diagram(int dim, double p_d, double p_g, double sd_lo,
                           double sd_hi, double sg_lo, double sg_hi,
                           int resolution, EstimatorClass estimator_class) {
  if (resolution < 1 || resolution > 2048)
    throw std::invalid_argument("resolution must lie in [1, 2048]");
  PhaseDiagram dg;
  dg.dim = dim;
  dg.p_d = p_d;
  dg.p_g = p_g;
  dg.estimator_class = estimator_class;
  dg.sigma_d.resize(static_cast<std::size_t>(resolution));
  dg.sigma_g.resize(static_cast<std::size_t>(resolution));
  for (int i = 0; i < resolution; ++i) {
    dg.sigma_d[static_cast<std::size_t>(i)] =
        sd_lo + (i + 0.5) * (sd_hi - sd_lo) / resolution;
    dg.sigma_g[static_cast<std::size_t>(i)] =
        sg_lo + (i + 0.5) * (sg_hi - sg_lo) / resolution;
  }
  dg.cells.reserve(dg.sigma_d.size() * dg.sigma_g.size());
  for (double sd : dg.sigma_d) {
    for (double sg : dg.sigma_g) {
      ProblemSpec s;
      s.dim = dim;
      s.discriminator = BallParams{sd, p_d, 2.0, 1.0};
      s.generator = BallParams{sg, p_g, 2.0, 1.0};
      RateResult r = estimator_class == EstimatorClass::kGeneral
                         ? minimax_exponent(s)
                         : linear_exponent(s);
      if (estimator_class == EstimatorClass::kGeneral)
        r.regime = classify_regime(s).regime;
      dg.cells.push_back(r);
    }
  }
  return dg;
}

void write_phase_csv(const PhaseDiagram& diagram, std::ostream& os) {
  os << "sigma_d,sigma_g,exponent,regime\n";
  char buf[96];
  for (std::size_t i = 0; i < diagram.sigma_d.size(); ++i) {
    for (std::size_t j = 0; j < diagram.sigma_g.size(); ++j) {
      const RateResult& r = diagram.at(i, j);
      const double e = r.regime == Regime::kInfeasible ? 0.0 : r.exponent;
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,", diagram.sigma_d[i],
                    diagram.sigma_g[j], e);
      os << buf << to_string(r.regime) << "\n";
    }
  }
}

void write_phase_svg(const PhaseDiagram& diagram, std::ostream& os) {
  const double margin = 48;
  const double plot = 512;
  const double width = plot + 2 * margin;
  const double height = plot + 2 * margin;
  const std::size_t nd = diagram.sigma_d.size();
  const std::size_t ng = diagram.sigma_g.size();
  const double cw = plot / static_cast<double>(nd);
  const double ch = plot / static_cast<double>(ng);

  svg::begin(os, width, height);
  svg::rect(os, 0, 0, width, height, "#ffffff");
  // x axis: sigma_d; y axis: sigma_g, increasing upward.
  for (std::size_t i = 0; i < nd; ++i) {
    for (std::size_t j = 0; j < ng; ++j) {
      const RateResult& r = diagram.at(i, j);
      const std::string fill =
          r.regime == Regime::kInfeasible
              ? "#bbbbbb"
              : svg::heat_color(r.exponent / 0.5);
      const double x = margin + static_cast<double>(i) * cw;
      const double y = margin + plot - static_cast<double>(j + 1) * ch;
      svg::rect(os, x, y, cw + 0.25, ch + 0.25, fill);
    }
  }

  // Regime boundary polylines: scan each column of cells for regime
  // changes along sigma_g and connect the crossing midpoints.
  auto boundary = [&](Regime a, Regime b) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < nd; ++i) {
      for (std::size_t j = 0; j + 1 < ng; ++j) {
        const Regime r0 = diagram.at(i, j).regime;
        const Regime r1 = diagram.at(i, j + 1).regime;
        if ((r0 == a && r1 == b) || (r0 == b && r1 == a)) {
          const double x = margin + (static_cast<double>(i) + 0.5) * cw;
          const double y =
              margin + plot - (static_cast<double>(j) + 1.0) * ch;
          pts.emplace_back(x, y);
        }
      }
    }
    return pts;
  };
  svg::polyline(os, boundary(Regime::kInfeasible, Regime::kSparse), "#000000",
                1.5);
  svg::polyline(os, boundary(Regime::kSparse, Regime::kDense), "#000000",
                1.5);
  svg::polyline(os, boundary(Regime::kDense, Regime::kParametric), "#000000",
                1.5);
  svg::polyline(os, boundary(Regime::kSparse, Regime::kParametric),
                "#000000", 1.5);
  svg::polyline(os, boundary(Regime::kInfeasible, Regime::kDense), "#000000",
                1.5);

  svg::line(os, margin, margin, margin, margin + plot, "#000000", 1.0);
  svg::line(os, margin, margin + plot, margin + plot, margin + plot,
            "#000000", 1.0);
  svg::text(os, margin + plot / 2 - 30, height - 12, "sigma_d");
  svg::text(os, 6, margin + 10, "sigma_g");
  const char* label = diagram.estimator_class == EstimatorClass::kGeneral
                          ? "general estimators"
                          : "linear estimators";
  svg::text(os, margin, margin - 12, label);
  svg::end(os);
}

}  // namespace besovdens
