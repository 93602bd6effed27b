#ifndef BESOVDENS_SAMPLING_HPP_
#define BESOVDENS_SAMPLING_HPP_

#include <cstdint>
#include <vector>

#include "besovdens/coefficients.hpp"
#include "besovdens/wavelet.hpp"

namespace besovdens {

/// SplitMix64: the standard 64-bit splittable counter generator. Determinism
/// contract: a stream is fully determined by its 64-bit seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

/// Stream seed for trial `trial` of a size-n run: seed XOR hash(n, trial),
/// so trials get independent streams that are schedule-invariant.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t n,
                                 std::uint64_t trial);

/// A 1-D density tabulated on a uniform grid of step 2^-G with its CDF.
/// The CDF is the cumulative of per-cell midpoint masses, renormalized to
/// end exactly at 1; it is exact for dyadic step densities. Clipping of a
/// negative reconstruction and the renormalization factor are recorded.
struct TabulatedDensity {
  double lo = 0;
  double hi = 0;
  int grid_exponent = 0;
  std::vector<double> pdf;        // values at grid nodes (clipped at 0)
  std::vector<double> cell_mass;  // renormalized midpoint masses per cell
  std::vector<double> cdf;        // at grid nodes; cdf[0] = 0, back() = 1
  double clipped_mass = 0;        // negative mass removed, pre-normalization
  double renormalization = 1;     // divisor applied to reach unit mass
  std::uint64_t source_hash = 0;  // provenance: hash of the source tree
};

/// Tabulates the reconstruction of `tree` on [-T, T]. Throws when the
/// clipped negative mass exceeds `clip_tolerance` unless `allow_clipping`.
TabulatedDensity tabulate(const CoefficientTree& tree,
                          const WaveletBasis& basis, double support_halfwidth,
                          int grid_exponent, double clip_tolerance = 1e-6,
                          bool allow_clipping = false);

double cdf_at(const TabulatedDensity& density, double x);
double pdf_at(const TabulatedDensity& density, double x);

/// Inverse-CDF draw of n points, deterministic in the seed.
std::vector<double> sample(const TabulatedDensity& density, std::size_t n,
                           std::uint64_t seed);

}  // namespace besovdens

#endif  // BESOVDENS_SAMPLING_HPP_
