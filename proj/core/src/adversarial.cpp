#include "besovdens/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "besovdens/sampling.hpp"
#include "besovdens/transform.hpp"

namespace besovdens {

namespace {

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

// Quintic smoothstep: C^2 ramp from 0 to 1 on [0, 1].
double smoothstep(double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double profile(double t, double halfwidth, double rolloff) {
  const double a = std::abs(t);
  if (a <= halfwidth) return 1.0;
  return 1.0 - smoothstep((a - halfwidth) / rolloff);
}

int checked_int(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9)
    throw std::logic_error("translate grid is not integral");
  return static_cast<int>(r);
}

struct SlotQuadrature {
  // Per-slot quantities for tau = -1 (index 0) and tau = +1 (index 1).
  double kl[2] = {0, 0};
  double l2[2] = {0, 0};
  double floor_[2] = {0, 0};
  double psi_integral = 0;  // integral of psi_lambda over one slot
  int quad_exponent = 0;
};

// All slots are translates of one wavelet over the constant part of g0, so
// one quadrature per sign serves every slot.
SlotQuadrature slot_quadrature(const AdversarialFamily& f,
                               int quad_exponent) {
  SlotQuadrature q;
  q.quad_exponent = quad_exponent;
  const WaveletIndex& idx = f.slots.front();
  const double step = std::ldexp(1.0, -quad_exponent);
  const double S = f.basis->support_width();
  const double c = f.plateau;
  q.floor_[0] = q.floor_[1] = c;

  auto integrate_dim = [&](auto&& body) {
    const double lo0 = std::ldexp(static_cast<double>(idx.k[0]), -idx.level);
    const double hi0 =
        std::ldexp(static_cast<double>(idx.k[0]) + S, -idx.level);
    const std::int64_t c0 =
        static_cast<std::int64_t>(std::llround((hi0 - lo0) / step));
    if (f.dim == 1) {
      for (std::int64_t i = 0; i < c0; ++i) {
        const double x = lo0 + (static_cast<double>(i) + 0.5) * step;
        body(Point{x, 0.0}, step);
      }
      return;
    }
    const double lo1 = std::ldexp(static_cast<double>(idx.k[1]), -idx.level);
    const double hi1 =
        std::ldexp(static_cast<double>(idx.k[1]) + S, -idx.level);
    const std::int64_t c1 =
        static_cast<std::int64_t>(std::llround((hi1 - lo1) / step));
    for (std::int64_t i = 0; i < c0; ++i) {
      const double x0 = lo0 + (static_cast<double>(i) + 0.5) * step;
      for (std::int64_t l = 0; l < c1; ++l) {
        const double x1 = lo1 + (static_cast<double>(l) + 0.5) * step;
        body(Point{x0, x1}, step * step);
      }
    }
  };

  integrate_dim([&](const Point& x, double weight) {
    const double w = evaluate_mother(*f.basis, idx, x, f.dim);
    q.psi_integral += weight * w;
    for (int s = 0; s < 2; ++s) {
      const double tau = s == 0 ? -1.0 : 1.0;
      const double m = c + f.amplitude_g * tau * w;
      if (m <= 0.0)
        throw std::domain_error(
            "nonpositive density at a quadrature node");
      q.kl[s] += weight * m * std::log(m / c);
      q.l2[s] += weight * (m - c) * (m - c);
      q.floor_[s] = std::min(q.floor_[s], m);
    }
  });
  return q;
}

}  // namespace

std::vector<Translate> translate_grid(int level, double support_halfwidth,
                                      int dim) {
  if (level < 0) throw std::invalid_argument("negative level");
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("unsupported dimension");
  const double A = support_halfwidth;
  const std::int64_t count = std::int64_t{1} << level;
  std::vector<int> axis;
  axis.reserve(static_cast<std::size_t>(count));
  for (std::int64_t l = 0; l < count; ++l)
    axis.push_back(checked_int(-(static_cast<double>(count) - 1) * A +
                               2.0 * static_cast<double>(l) * A));
  std::vector<Translate> out;
  if (dim == 1) {
    for (int k : axis) out.push_back(translate1(k));
    return out;
  }
  out.reserve(axis.size() * axis.size());
  for (int k0 : axis)
    for (int k1 : axis) out.push_back(Translate{k0, k1});
  return out;
}

std::vector<std::vector<std::uint8_t>> vg_codebook(int m,
                                                   std::uint64_t seed) {
  if (m < 8) throw std::invalid_argument("codebook length must be >= 8");
  const int min_distance = (m + 7) / 8;
  const double target_d = std::ceil(std::exp2(static_cast<double>(m) / 8.0));
  if (target_d > static_cast<double>(1 << 20))
    throw std::length_error("requested codebook is too large to materialize");
  const std::size_t target = static_cast<std::size_t>(target_d);

  std::vector<std::vector<std::uint8_t>> words;
  words.emplace_back(static_cast<std::size_t>(m), std::uint8_t{0});

  SplitMix64 rng(seed ^ static_cast<std::uint64_t>(m));
  auto hamming = [m](const std::vector<std::uint8_t>& a,
                     const std::vector<std::uint8_t>& b) {
    int d = 0;
    for (int i = 0; i < m; ++i) d += a[static_cast<std::size_t>(i)] !=
                                      b[static_cast<std::size_t>(i)];
    return d;
  };

  std::vector<std::uint8_t> candidate(static_cast<std::size_t>(m));
  const std::uint64_t max_attempts =
      4096ull * static_cast<std::uint64_t>(target) *
      static_cast<std::uint64_t>(m);
  std::uint64_t attempts = 0;
  while (words.size() < target) {
    if (++attempts > max_attempts)
      throw std::runtime_error("codebook search did not reach the bound");
    std::uint64_t bits = 0;
    int have = 0;
    for (int i = 0; i < m; ++i) {
      if (have == 0) {
        bits = rng.next();
        have = 64;
      }
      candidate[static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>(bits & 1u);
      bits >>= 1;
      --have;
    }
    bool ok = true;
    for (const auto& w : words) {
      if (hamming(w, candidate) < min_distance) {
        ok = false;
        break;
      }
    }
    if (ok) words.push_back(candidate);
  }
  return words;
}

double AdversarialFamily::base_pdf(const Point& x) const {
  double v = plateau;
  for (int d = 0; d < dim; ++d)
    v *= profile(x[d], plateau_halfwidth, rolloff);
  return v;
}

namespace {

// Index of the slot whose support contains x, or -1. Slots are spaced 2A
// per axis, supports have width S <= 2A, so at most one slot matches.
int slot_axis_index(double coord, int level, double A, double S) {
  const double scaled = std::ldexp(coord, level);
  const double count = std::exp2(level);
  const double offset = (count - 1.0) * A;
  const int l = static_cast<int>(std::floor((scaled + offset) / (2.0 * A)));
  for (int cand = l; cand >= l - 1; --cand) {
    if (cand < 0 || cand >= static_cast<int>(count)) continue;
    const double k = -offset + 2.0 * static_cast<double>(cand) * A;
    const double arg = scaled - k;
    if (arg >= 0.0 && arg < S) return cand;
  }
  return -1;
}

}  // namespace

double AdversarialFamily::member_pdf(std::size_t member,
                                     const Point& x) const {
  double v = base_pdf(x);
  const double A = basis->support_halfwidth();
  const double S = basis->support_width();
  const std::int64_t count = std::int64_t{1} << level;
  std::int64_t slot = 0;
  for (int d = 0; d < dim; ++d) {
    const int axis = slot_axis_index(x[d], level, A, S);
    if (axis < 0) return v;
    slot = slot * count + axis;
  }
  const signed char tau = codebook[member][static_cast<std::size_t>(slot)];
  if (tau == 0) return v;
  return v + amplitude_g * static_cast<double>(tau) *
                 evaluate_mother(*basis, slots[static_cast<std::size_t>(slot)],
                                 x, dim);
}

CoefficientTree AdversarialFamily::perturbation_tree(
    std::size_t member) const {
  CoefficientTree t(dim);
  const auto& tau = codebook[member];
  for (std::size_t s = 0; s < slots.size(); ++s)
    if (tau[s] != 0)
      t.set_mother(slots[s], amplitude_g * static_cast<double>(tau[s]));
  return t;
}

CoefficientTree AdversarialFamily::member_tree(std::size_t member) const {
  CoefficientTree t = base_tree;
  const auto& tau = codebook[member];
  for (std::size_t s = 0; s < slots.size(); ++s)
    if (tau[s] != 0)
      t.add_mother(slots[s], amplitude_g * static_cast<double>(tau[s]));
  return t;
}

CoefficientTree AdversarialFamily::discriminator_tree(
    std::size_t member) const {
  CoefficientTree t(dim);
  const auto& tau = codebook[member];
  for (std::size_t s = 0; s < slots.size(); ++s)
    if (tau[s] != 0)
      t.set_mother(slots[s], amplitude_d * static_cast<double>(tau[s]));
  return t;
}

namespace {

AdversarialFamily build_family(AdversarialFamily::Kind kind, int level,
                               const ProblemSpec& spec,
                               const WaveletBasis& basis) {
  const int D = spec.dim;
  const double sg = spec.generator.sigma;
  const double sd = spec.discriminator.sigma;
  if (sg < D * inv(spec.generator.p))
    throw std::invalid_argument("construction requires sigma_g >= D/p_g");

  AdversarialFamily f;
  f.kind = kind;
  f.level = level;
  f.dim = D;
  f.basis = &basis;
  f.generator = spec.generator;
  f.discriminator = spec.discriminator;
  f.plateau_halfwidth = basis.support_halfwidth();
  f.rolloff = 1.0;
  f.plateau = 1.0 / std::pow(2.0 * f.plateau_halfwidth + f.rolloff, D);

  // lambda = 2^{-j} k + 2^{-j-1} eps_1 over the disjoint translate grid,
  // with the first orientation (psi in dimension 1, phi elsewhere).
  for (const Translate& k : translate_grid(level, f.plateau_halfwidth, D))
    f.slots.push_back(WaveletIndex{level, k, 1u});
  const std::size_t m = f.slots.size();

  if (kind == AdversarialFamily::Kind::kSparse) {
    for (std::size_t s = 0; s < m; ++s) {
      std::vector<signed char> tau(m, 0);
      tau[s] = 1;
      f.codebook.push_back(std::move(tau));
    }
  } else {
    const auto words = vg_codebook(static_cast<int>(m));
    for (const auto& w : words) {
      std::vector<signed char> tau(m, 0);
      for (std::size_t s = 0; s < m; ++s)
        tau[s] = static_cast<signed char>(w[s] ? 1 : -1);
      f.codebook.push_back(std::move(tau));
    }
  }

  // Sup of the tensor mother psi (x) phi (x) ... phi.
  double father_sup = 0.0;
  for (double v : basis.father_grid())
    father_sup = std::max(father_sup, std::abs(v));
  const double tensor_sup =
      basis.mother_sup_norm() * std::pow(father_sup, D - 1);

  const double positivity_cap =
      f.plateau / (2.0 * tensor_sup) * std::exp2(-0.5 * D * level);
  const double ball_exponent =
      kind == AdversarialFamily::Kind::kSparse
          ? sg + 0.5 * D - D * inv(spec.generator.p)
          : sg + 0.5 * D;
  const double ball_cap =
      0.5 * spec.generator.radius * std::exp2(-level * ball_exponent);
  double cap = std::min(positivity_cap, ball_cap);

  if (spec.n) {
    // Fano cap: pick c_g small enough that n KL <= log|T| / 16 holds with
    // the conservative floor plateau/2, i.e. KL <= (4/c) ||h||_2^2.
    const double n = static_cast<double>(*spec.n);
    const double log_T = std::log(static_cast<double>(f.codebook.size()));
    if (log_T > 0) {
      const double l2_per_cg2 =
          kind == AdversarialFamily::Kind::kSparse
              ? 1.0
              : static_cast<double>(m);
      cap = std::min(cap, std::sqrt(f.plateau * log_T /
                                    (64.0 * n * l2_per_cg2)));
    }
  }
  f.amplitude_g = cap;

  const double disc_exponent =
      kind == AdversarialFamily::Kind::kSparse
          ? sd + 0.5 * D - D * inv(spec.discriminator.p)
          : sd + 0.5 * D;
  f.amplitude_d =
      spec.discriminator.radius * std::exp2(-level * disc_exponent);

  const int base_quad = std::max(level + 2, D == 1 ? 12 : 7);
  f.base_tree = decompose(
      [&f](const Point& x) { return f.base_pdf(x); }, basis, level,
      f.plateau_halfwidth + f.rolloff, base_quad, D);

  const double base_norm = besov_norm(f.base_tree, spec.generator.sigma,
                                      spec.generator.p, spec.generator.q);
  if (base_norm > 0.5 * spec.generator.radius)
    throw std::invalid_argument(
        "base density exceeds half the generator radius; increase L_g");
  return f;
}

}  // namespace

AdversarialFamily sparse_family(int level, const ProblemSpec& spec,
                                const WaveletBasis& basis) {
  return build_family(AdversarialFamily::Kind::kSparse, level, spec, basis);
}

AdversarialFamily dense_family(int level, const ProblemSpec& spec,
                               const WaveletBasis& basis) {
  return build_family(AdversarialFamily::Kind::kDense, level, spec, basis);
}

KlCheckResult kl_check(const AdversarialFamily& family, std::size_t member,
                       std::uint64_t n, int quad_exponent) {
  const SlotQuadrature q = slot_quadrature(family, quad_exponent);
  KlCheckResult r;
  r.density_floor = family.plateau;
  const auto& tau = family.codebook[member];
  double l2 = 0.0;
  for (signed char t : tau) {
    if (t == 0) continue;
    const int s = t > 0 ? 1 : 0;
    r.kl_per_sample += q.kl[s];
    l2 += q.l2[s];
    r.density_floor = std::min(r.density_floor, q.floor_[s]);
  }
  r.bound = 2.0 / r.density_floor * l2;
  const double rhs =
      std::log(static_cast<double>(family.size())) / 16.0;
  r.fano_ok = static_cast<double>(n) * r.kl_per_sample <= rhs;
  return r;
}

double kl_divergence(const std::function<double(double)>& f,
                     const std::function<double(double)>& g, double lo,
                     double hi, int quad_exponent) {
  const double step = std::ldexp(1.0, -quad_exponent);
  const std::int64_t cells =
      static_cast<std::int64_t>(std::llround((hi - lo) / step));
  double kl = 0.0;
  for (std::int64_t i = 0; i < cells; ++i) {
    const double x = lo + (static_cast<double>(i) + 0.5) * step;
    const double fv = f(x);
    const double gv = g(x);
    if (fv < 0.0 || (fv > 0.0 && gv <= 0.0))
      throw std::domain_error("nonpositive density at a quadrature node");
    if (fv > 0.0) kl += step * fv * std::log(fv / gv);
  }
  return kl;
}

double min_separation(const AdversarialFamily& family) {
  const std::size_t M = family.size();
  if (M < 2) throw std::invalid_argument("family needs at least two members");
  std::vector<CoefficientTree> perturbations;
  perturbations.reserve(M);
  for (std::size_t i = 0; i < M; ++i)
    perturbations.push_back(family.perturbation_tree(i));
  const BesovBall ball{family.discriminator.sigma, family.discriminator.p,
                       family.discriminator.q, family.discriminator.radius,
                       family.dim};
  double s = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = i + 1; j < M; ++j)
      s = std::min(s, dual_ipm(perturbations[i] - perturbations[j], ball));
  return s;
}

double fano_bound(const AdversarialFamily& family, std::uint64_t n,
                  int quad_exponent) {
  if (family.size() < 2)
    throw std::invalid_argument(
        "Fano bound is vacuous for a single-member family");
  for (std::size_t i = 0; i < family.size(); ++i)
    if (!kl_check(family, i, n, quad_exponent).fano_ok)
      throw std::domain_error("Fano KL condition unmet for this sample size");
  return min_separation(family) / 16.0;
}

MemberAudit audit_member(const AdversarialFamily& family, std::size_t member,
                         std::uint64_t n, int quad_exponent) {
  MemberAudit a;
  const CoefficientTree tree = family.member_tree(member);
  a.besov_norm = besov_norm(tree, family.generator.sigma, family.generator.p,
                            family.generator.q);
  a.in_ball = a.besov_norm <= family.generator.radius * (1 + 1e-12);

  // Quadrature mass splits into the base mass plus the perturbation slots
  // (the quadrature lattices align, so the split is exact).
  const double T = family.plateau_halfwidth + family.rolloff;
  const SlotQuadrature q = slot_quadrature(family, quad_exponent);
  double base_mass;
  if (family.dim == 1) {
    base_mass = quadrature_1d(
        [&](double x) { return family.base_pdf(point1(x)); }, -T, T,
        quad_exponent);
  } else {
    const double step = std::ldexp(1.0, -quad_exponent);
    const std::int64_t cells =
        static_cast<std::int64_t>(std::llround(2.0 * T / step));
    base_mass = 0.0;
    for (std::int64_t i = 0; i < cells; ++i) {
      const double x0 = -T + (static_cast<double>(i) + 0.5) * step;
      for (std::int64_t l = 0; l < cells; ++l) {
        const double x1 = -T + (static_cast<double>(l) + 0.5) * step;
        base_mass += family.base_pdf(Point{x0, x1}) * step * step;
      }
    }
  }
  double signed_slots = 0.0;
  double floor_ = family.plateau;
  for (signed char t : family.codebook[member]) {
    if (t == 0) continue;
    signed_slots += static_cast<double>(t);
    floor_ = std::min(floor_, q.floor_[t > 0 ? 1 : 0]);
  }
  a.mass = base_mass + family.amplitude_g * signed_slots * q.psi_integral;
  a.unit_mass = std::abs(a.mass - 1.0) <= 1e-8;

  a.min_value = floor_;
  // Off the slots the member equals g0 >= 0.
  a.global_min = std::min(0.0, a.min_value);
  a.nonnegative = a.min_value >= 0.0;

  const KlCheckResult k = kl_check(family, member, n, quad_exponent);
  a.kl_per_sample = k.kl_per_sample;
  a.fano_ok = k.fano_ok;
  return a;
}

bool supports_disjoint(const AdversarialFamily& family) {
  const double S = family.basis->support_width();
  const int j = family.level;
  for (std::size_t a = 0; a < family.slots.size(); ++a) {
    for (std::size_t b = a + 1; b < family.slots.size(); ++b) {
      bool overlap = true;
      for (int d = 0; d < family.dim; ++d) {
        const double lo_a =
            std::ldexp(static_cast<double>(family.slots[a].k[d]), -j);
        const double lo_b =
            std::ldexp(static_cast<double>(family.slots[b].k[d]), -j);
        const double hi_a = lo_a + std::ldexp(S, -j);
        const double hi_b = lo_b + std::ldexp(S, -j);
        if (!(lo_a < hi_b && lo_b < hi_a)) {
          overlap = false;
          break;
        }
      }
      if (overlap) return false;
    }
  }
  return true;
}

}  // namespace besovdens
