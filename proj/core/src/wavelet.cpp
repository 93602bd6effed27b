#include "besovdens/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace besovdens {

namespace {

// Minimal-phase Daubechies filters, 20 significant digits, standard tables.
// dbN has 2N taps; the father is supported on [0, 2N-1].
const std::vector<double>& daubechies_filter(int n) {
  static const std::vector<std::vector<double>> tables = {
      // db2
      {0.48296291314453414337, 0.83651630373780790558, 0.22414386804201338103,
       -0.12940952255126038117},
      // db3
      {0.33267055295008261600, 0.80689150931109257649, 0.45987750211849157010,
       -0.13501102001025458870, -0.085441273882026661693,
       0.035226291885709536603},
      // db4
      {0.23037781330889650086, 0.71484657055291564709, 0.63088076792985890788,
       -0.027983769416859854211, -0.18703481171909308408,
       0.030841381835560763627, 0.032883011666885199735,
       -0.010597401785069032105},
      // db5
      {0.16010239797419291448, 0.60382926979718967054, 0.72430852843777292773,
       0.13842814590132073151, -0.24229488706638203186,
       -0.032244869584638374648, 0.077571493840045713523,
       -0.0062414902127982742742, -0.012580751999081999469,
       0.0033357252854737712780},
      // db6
      {0.11154074335010946362, 0.49462389039845308568, 0.75113390802109535068,
       0.31525035170919762909, -0.22626469396543982008, -0.12976686756726193556,
       0.097501605587323049102, 0.027522865530305728626,
       -0.031582039317486029565, 0.00055384220116149613925,
       0.0047772575109455106396, -0.0010773010853084795649},
      // db7
      {0.077852054085009179020, 0.39653931948191730654, 0.72913209084623511992,
       0.46978228740519312247, -0.14390600392856497541, -0.22403618499387498264,
       0.071309219266830264751, 0.080612609151083071913,
       -0.038029936935014413580, -0.016574541630666880654,
       0.012550998556099840613, 0.00042957797292136652113,
       -0.0018016407040474909153, 0.00035371379997452024845},
      // db8
      {0.054415842243104009955, 0.31287159091429997066, 0.67563073629728980681,
       0.58535468365420671277, -0.015829105256349305667, -0.28401554296154692652,
       0.00047248457391328277036, 0.12874742662047845886,
       -0.017369301001807546170, -0.044088253930794751507,
       0.013981027917398281649, 0.0087460940474057767164,
       -0.0048703529934515743104, -0.00039174037337694704630,
       0.00067544940645056936637, -0.00011747678412476953373},
      // db9
      {0.038077947363878346589, 0.24383467461259035373, 0.60482312369011111190,
       0.65728807805130053808, 0.13319738582500757619, -0.29327378327917490881,
       -0.096840783222976460514, 0.14854074933810638014,
       0.030725681479333379212, -0.067632829061329973676,
       0.00025094711483145195759, 0.022361662123679097205,
       -0.0047232047577513972779, -0.0042815036824634298345,
       0.0018476468830562264766, 0.00023038576352319596721,
       -0.00025196318894271013697, 0.000039347320316271599481},
      // db10
      {0.026670057900555553587, 0.18817680007769148902, 0.52720118893172558648,
       0.68845903945360356574, 0.28117234366057746075, -0.24984642432731537942,
       -0.19594627437737704350, 0.12736934033579326008, 0.093057364603572351160,
       -0.071394147166397087145, -0.029457536821875812858,
       0.033212674059341001740, 0.0036065535669561696554,
       -0.010733175483330575044, 0.0013953517470529011658,
       0.0019924052951850561172, -0.00068585669495971162656,
       -0.00011646685512928545095, 0.000093588670320069591334,
       -0.000013264202894521244812}};
  return tables.at(static_cast<std::size_t>(n - 2));
}

// floor(alpha) of the published Hoelder exponents of dbN scaling functions.
int daubechies_regularity(int n) {
  static const int r[] = {0, 1, 1, 1, 2, 2, 2, 3, 3};  // db2..db10
  return r[n - 2];
}

// Parses "haar", "daubechies-N", "dbN"; returns 0 for haar, N otherwise.
int parse_family(std::string_view name) {
  if (name == "haar") return 0;
  std::string_view digits;
  if (name.starts_with("daubechies-")) {
    digits = name.substr(11);
  } else if (name.starts_with("db")) {
    digits = name.substr(2);
  } else {
    throw std::invalid_argument("unknown wavelet family: " +
                                std::string(name));
  }
  int n = 0;
  for (char c : digits) {
    if (c < '0' || c > '9')
      throw std::invalid_argument("unknown wavelet family: " +
                                  std::string(name));
    n = 10 * n + (c - '0');
  }
  if (n < 2 || n > 10)
    throw std::invalid_argument("unsupported Daubechies order: " +
                                std::string(name));
  return n;
}

}  // namespace

WaveletBasis WaveletBasis::build(std::string_view family, int grid_exponent) {
  if (grid_exponent < 6 || grid_exponent > 16)
    throw std::invalid_argument("grid exponent must lie in [6, 16]");

  WaveletBasis b;
  b.grid_exponent_ = grid_exponent;
  const int n = parse_family(family);

  if (n == 0) {
    b.family_ = "haar";
    b.haar_ = true;
    b.support_width_ = 1.0;
    b.regularity_ = 0;
    b.filter_ = {std::sqrt(0.5), std::sqrt(0.5)};
    const std::size_t count = (std::size_t{1} << grid_exponent) + 1;
    b.father_grid_.assign(count, 1.0);
    b.father_grid_.back() = 0.0;
    b.mother_grid_.assign(count, 1.0);
    for (std::size_t i = count / 2; i < count; ++i) b.mother_grid_[i] = -1.0;
    b.mother_grid_.back() = 0.0;
    b.mother_sup_ = 1.0;
    b.mother_l2_ = 1.0;
    return b;
  }

  b.family_ = "daubechies-" + std::to_string(n);
  b.support_width_ = 2 * n - 1;
  b.regularity_ = daubechies_regularity(n);
  b.filter_ = daubechies_filter(n);

  const int width = 2 * n - 1;
  const std::int64_t step_count = std::int64_t{1} << grid_exponent;
  const std::size_t count = static_cast<std::size_t>(width) * step_count + 1;

  // Cascade iteration on the fixed dyadic grid: phi <- sqrt(2) sum_m h_m
  // phi(2x - m). The argument 2x - m lands on the same grid, so the
  // iteration is closed. Start from the unit box and refine until the
  // sup-norm change drops below min(2^-G, 1e-9).
  std::vector<double> phi(count, 0.0);
  for (std::size_t i = 0; i < count; ++i)
    phi[i] = (static_cast<std::int64_t>(i) < step_count) ? 1.0 : 0.0;

  const double sqrt2 = std::sqrt(2.0);
  const double tol = std::min(std::ldexp(1.0, -grid_exponent), 1e-9);
  std::vector<double> next(count, 0.0);
  for (int iter = 0; iter < 500; ++iter) {
    double diff = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      double acc = 0.0;
      for (std::size_t m = 0; m < b.filter_.size(); ++m) {
        const std::int64_t src = 2 * static_cast<std::int64_t>(i) -
                                 static_cast<std::int64_t>(m) * step_count;
        if (src >= 0 && src < static_cast<std::int64_t>(count))
          acc += b.filter_[m] * phi[static_cast<std::size_t>(src)];
      }
      acc *= sqrt2;
      diff = std::max(diff, std::abs(acc - phi[i]));
      next[i] = acc;
    }
    phi.swap(next);
    if (diff < tol) break;
  }
  b.father_grid_ = phi;

  // psi(x) = sqrt(2) sum_m g_m phi(2x - m), g_m = (-1)^m h_{M-1-m}.
  const std::size_t taps = b.filter_.size();
  b.mother_grid_.assign(count, 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    double acc = 0.0;
    for (std::size_t m = 0; m < taps; ++m) {
      const std::int64_t src = 2 * static_cast<std::int64_t>(i) -
                               static_cast<std::int64_t>(m) * step_count;
      if (src < 0 || src >= static_cast<std::int64_t>(count)) continue;
      const double g = ((m & 1) ? -1.0 : 1.0) * b.filter_[taps - 1 - m];
      acc += g * phi[static_cast<std::size_t>(src)];
    }
    b.mother_grid_[i] = sqrt2 * acc;
  }

  double sup = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sup = std::max(sup, std::abs(b.mother_grid_[i]));
    const double w = (i == 0 || i + 1 == count) ? 0.5 : 1.0;
    sumsq += w * b.mother_grid_[i] * b.mother_grid_[i];
  }
  b.mother_sup_ = sup;
  b.mother_l2_ = std::sqrt(sumsq * std::ldexp(1.0, -grid_exponent));
  return b;
}

double WaveletBasis::eval_grid(const std::vector<double>& grid,
                               double x) const {
  if (x <= 0.0 || x >= support_width_) return 0.0;
  const double pos = std::ldexp(x, grid_exponent_);
  const double fl = std::floor(pos);
  const std::size_t i = static_cast<std::size_t>(fl);
  const double frac = pos - fl;
  if (frac == 0.0) return grid[i];
  return grid[i] + frac * (grid[i + 1] - grid[i]);
}

double WaveletBasis::father(double x) const {
  if (haar_) return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0;
  return eval_grid(father_grid_, x);
}

double WaveletBasis::mother(double x) const {
  if (haar_) {
    if (x < 0.0 || x >= 1.0) return 0.0;
    return x < 0.5 ? 1.0 : -1.0;
  }
  return eval_grid(mother_grid_, x);
}

double evaluate_mother(const WaveletBasis& basis, const WaveletIndex& index,
                       const Point& x, int dim) {
  double prod = 1.0;
  for (int d = 0; d < dim; ++d) {
    const double arg = std::ldexp(x[d], index.level) - index.k[d];
    const double w = (index.orientation >> d) & 1u ? basis.mother(arg)
                                                   : basis.father(arg);
    if (w == 0.0) return 0.0;
    prod *= w;
  }
  return std::exp2(0.5 * dim * index.level) * prod;
}

double evaluate_father(const WaveletBasis& basis, const Translate& k,
                       const Point& x, int dim) {
  double prod = 1.0;
  for (int d = 0; d < dim; ++d) {
    const double w = basis.father(x[d] - k[d]);
    if (w == 0.0) return 0.0;
    prod *= w;
  }
  return prod;
}

std::pair<int, int> translate_range(const WaveletBasis& basis, int level,
                                    double support_halfwidth) {
  // Support of w(2^j x - k) is (k, k + S)/2^j up to endpoints where the
  // function vanishes; it meets the open box iff -T 2^j - S < k < T 2^j.
  const double scale = std::ldexp(support_halfwidth, level);
  const double lo_bound = -scale - basis.support_width();
  const double hi_bound = scale;
  int lo = static_cast<int>(std::floor(lo_bound)) + 1;
  while (lo <= lo_bound) ++lo;
  int hi = static_cast<int>(std::ceil(hi_bound)) - 1;
  while (hi >= hi_bound) --hi;
  return {lo, hi};
}

std::vector<WaveletIndex> active_indices(const WaveletBasis& basis, int level,
                                         double support_halfwidth, int dim) {
  if (support_halfwidth <= 0)
    throw std::invalid_argument("support half-width must be positive");
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("unsupported dimension");
  const auto [lo, hi] = translate_range(basis, level, support_halfwidth);
  std::vector<WaveletIndex> out;
  if (hi < lo) return out;
  const unsigned orientations = (1u << dim) - 1;
  if (dim == 1) {
    out.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (int k = lo; k <= hi; ++k)
      out.push_back(WaveletIndex{level, translate1(k), 1});
    return out;
  }
  for (unsigned eps = 1; eps <= orientations; ++eps)
    for (int k0 = lo; k0 <= hi; ++k0)
      for (int k1 = lo; k1 <= hi; ++k1)
        out.push_back(WaveletIndex{level, Translate{k0, k1}, eps});
  return out;
}

std::vector<Translate> active_father_translates(const WaveletBasis& basis,
                                                double support_halfwidth,
                                                int dim) {
  if (support_halfwidth <= 0)
    throw std::invalid_argument("support half-width must be positive");
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("unsupported dimension");
  const auto [lo, hi] = translate_range(basis, 0, support_halfwidth);
  std::vector<Translate> out;
  if (hi < lo) return out;
  if (dim == 1) {
    for (int k = lo; k <= hi; ++k) out.push_back(translate1(k));
    return out;
  }
  for (int k0 = lo; k0 <= hi; ++k0)
    for (int k1 = lo; k1 <= hi; ++k1) out.push_back(Translate{k0, k1});
  return out;
}

}  // namespace besovdens
