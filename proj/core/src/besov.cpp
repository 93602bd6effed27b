#include "besovdens/besov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace besovdens {

namespace {

bool is_inf(double p) { return std::isinf(p); }

void check_exponent(double p) {
  if (!(p >= 1.0))
    throw std::invalid_argument("norm exponent must lie in [1, inf]");
}

double lp_norm_map_values(const auto& map, double p) {
  if (map.empty()) return 0.0;
  if (is_inf(p)) {
    double m = 0.0;
    for (const auto& [k, v] : map) m = std::max(m, std::abs(v));
    return m;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (const auto& [k, v] : map) s += std::abs(v);
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (const auto& [k, v] : map) s += v * v;
    return std::sqrt(s);
  }
  double m = 0.0;
  for (const auto& [k, v] : map) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& [k, v] : map) s += std::pow(std::abs(v) / m, p);
  return m * std::pow(s, 1.0 / p);
}

double inv(double p) { return is_inf(p) ? 0.0 : 1.0 / p; }

// 2^{j (sigma + D(1/2 - 1/p))}: the per-level Besov weight.
double level_weight(int j, double sigma, double p, int dim) {
  return std::exp2(j * (sigma + dim * (0.5 - inv(p))));
}

}  // namespace

double conjugate_exponent(double p) {
  check_exponent(p);
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  if (is_inf(p)) return 1.0;
  return p / (p - 1.0);
}

double lp_norm(std::span<const double> values, double p) {
  check_exponent(p);
  if (values.empty()) return 0.0;
  if (is_inf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (double v : values) s += std::abs(v);
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
  }
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v) / m, p);
  return m * std::pow(s, 1.0 / p);
}

double besov_norm(const CoefficientTree& tree, double sigma, double p,
                  double q) {
  check_exponent(p);
  check_exponent(q);
  const double father_part = lp_norm_map_values(tree.father_block(), p);
  std::vector<double> level_norms;
  level_norms.reserve(static_cast<std::size_t>(tree.level_count()));
  for (int j = 0; j < tree.level_count(); ++j)
    level_norms.push_back(level_weight(j, sigma, p, tree.dim()) *
                          lp_norm_map_values(tree.level(j), p));
  return father_part + lp_norm(level_norms, q);
}

double besov_norm(const CoefficientTree& tree, const BesovBall& ball) {
  if (ball.dim != tree.dim())
    throw std::invalid_argument("dimension mismatch between tree and ball");
  return besov_norm(tree, ball.sigma, ball.p, ball.q);
}

double dual_ipm(const CoefficientTree& diff, const BesovBall& discriminator) {
  if (discriminator.dim != diff.dim())
    throw std::invalid_argument("dimension mismatch between tree and ball");
  const double pc = conjugate_exponent(discriminator.p);
  const double qc = conjugate_exponent(discriminator.q);
  const double father_part = lp_norm_map_values(diff.father_block(), pc);
  std::vector<double> level_terms;
  level_terms.reserve(static_cast<std::size_t>(diff.level_count()));
  for (int j = 0; j < diff.level_count(); ++j)
    level_terms.push_back(
        lp_norm_map_values(diff.level(j), pc) /
        level_weight(j, discriminator.sigma, discriminator.p, diff.dim()));
  const double mother_part = lp_norm(level_terms, qc);
  return discriminator.radius * std::max(father_part, mother_part);
}

namespace {

// Witness block for sup <w, eta> subject to ||w||_p <= budget; attains
// budget * ||eta||_{p'}. Writes through `put(key, value)`.
template <typename Map, typename Put>
void put_lp_extremal(const Map& eta, double p, double budget, Put put) {
  if (eta.empty() || budget == 0.0) return;
  if (p == 1.0) {
    // Dual is l^inf: concentrate on the first entry of maximal magnitude.
    auto best = eta.begin();
    for (auto it = eta.begin(); it != eta.end(); ++it)
      if (std::abs(it->second) > std::abs(best->second)) best = it;
    put(best->first, budget * (best->second < 0 ? -1.0 : 1.0));
    return;
  }
  if (is_inf(p)) {
    for (const auto& [k, v] : eta)
      put(k, budget * (v < 0 ? -1.0 : 1.0));
    return;
  }
  const double pc = conjugate_exponent(p);
  const double norm = lp_norm_map_values(eta, pc);
  for (const auto& [k, v] : eta) {
    const double mag = std::pow(std::abs(v) / norm, pc - 1.0);
    put(k, budget * (v < 0 ? -mag : mag));
  }
}

}  // namespace

CoefficientTree extremal_witness(const CoefficientTree& diff,
                                 const BesovBall& discriminator) {
  if (discriminator.dim != diff.dim())
    throw std::invalid_argument("dimension mismatch between tree and ball");
  if (diff.empty())
    throw std::invalid_argument("extremal witness of the zero tree");

  const double pc = conjugate_exponent(discriminator.p);
  const double qc = conjugate_exponent(discriminator.q);
  const double L = discriminator.radius;
  const int dim = diff.dim();

  const double father_value = lp_norm_map_values(diff.father_block(), pc);
  std::vector<double> t(static_cast<std::size_t>(diff.level_count()), 0.0);
  for (int j = 0; j < diff.level_count(); ++j)
    t[static_cast<std::size_t>(j)] =
        lp_norm_map_values(diff.level(j), pc) /
        level_weight(j, discriminator.sigma, discriminator.p, dim);
  const double mother_value = lp_norm(t, qc);

  CoefficientTree witness(dim);
  if (father_value >= mother_value) {
    put_lp_extremal(diff.father_block(), discriminator.p, L,
                    [&](const Translate& k, double v) {
                      witness.set_father(k, v);
                    });
    return witness;
  }

  // Per-level budgets v_j with ||v||_q = L attaining <v, t> = L ||t||_{q'}.
  std::vector<double> budgets(t.size(), 0.0);
  if (discriminator.q == 1.0) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < t.size(); ++j)
      if (t[j] > t[best]) best = j;
    budgets[best] = L;
  } else if (is_inf(discriminator.q)) {
    for (std::size_t j = 0; j < t.size(); ++j)
      if (t[j] > 0.0) budgets[j] = L;
  } else {
    for (std::size_t j = 0; j < t.size(); ++j)
      if (t[j] > 0.0) budgets[j] = L * std::pow(t[j] / mother_value, qc - 1.0);
  }

  for (int j = 0; j < diff.level_count(); ++j) {
    const double v = budgets[static_cast<std::size_t>(j)];
    if (v == 0.0) continue;
    const double level_budget =
        v / level_weight(j, discriminator.sigma, discriminator.p, dim);
    put_lp_extremal(diff.level(j), discriminator.p, level_budget,
                    [&](const MotherKey& key, double value) {
                      witness.set_mother(
                          WaveletIndex{j, key.k, key.orientation}, value);
                    });
  }
  return witness;
}

double sup_norm_bound(const BesovBall& ball, const WaveletBasis& basis) {
  const double excess = ball.sigma - ball.dim * inv(ball.p);
  if (excess <= 0.0)
    throw std::domain_error("sup-norm bound requires sigma > D/p");
  const double qc = conjugate_exponent(ball.q);
  double factor;
  if (is_inf(qc))
    factor = 1.0;
  else
    factor = std::pow(1.0 - std::exp2(-excess * qc), -1.0 / qc);
  return 4.0 * basis.support_halfwidth() * basis.mother_sup_norm() *
         ball.radius * factor;
}

}  // namespace besovdens
