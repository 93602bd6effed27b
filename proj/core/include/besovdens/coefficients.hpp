#ifndef BESOVDENS_COEFFICIENTS_HPP_
#define BESOVDENS_COEFFICIENTS_HPP_

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "besovdens/wavelet.hpp"

namespace besovdens {

struct MotherKey {
  Translate k{};
  unsigned orientation = 1;

  friend auto operator<=>(const MotherKey&, const MotherKey&) = default;
};

/// Sparse wavelet coefficient tree: a father block (integer translate k ->
/// alpha_k) plus one sparse map per mother level 0 <= j <= max_level().
/// Unlisted indices are zero; setting a coefficient to exactly zero removes
/// it. This is the canonical representation of a density or discriminator.
class CoefficientTree {
 public:
  using FatherMap = std::map<Translate, double>;
  using LevelMap = std::map<MotherKey, double>;

  explicit CoefficientTree(int dim = 1);

  int dim() const { return dim_; }
  /// Highest stored level index; -1 when no mother levels exist.
  int max_level() const { return static_cast<int>(levels_.size()) - 1; }
  int level_count() const { return static_cast<int>(levels_.size()); }
  void ensure_level(int level);

  double father(const Translate& k) const;
  void set_father(const Translate& k, double value);
  void add_father(const Translate& k, double value);
  const FatherMap& father_block() const { return father_; }

  double mother(const WaveletIndex& index) const;
  void set_mother(const WaveletIndex& index, double value);
  void add_mother(const WaveletIndex& index, double value);
  const LevelMap& level(int j) const;

  std::size_t nonzero_count() const;
  bool empty() const { return nonzero_count() == 0; }

  /// Sum of father coefficients; equals the integral of the represented
  /// function because every father integrates to one.
  double mass() const;

  CoefficientTree& operator*=(double factor);
  CoefficientTree& operator+=(const CoefficientTree& other);
  CoefficientTree& operator-=(const CoefficientTree& other);
  friend CoefficientTree operator+(CoefficientTree a,
                                   const CoefficientTree& b) {
    a += b;
    return a;
  }
  friend CoefficientTree operator-(CoefficientTree a,
                                   const CoefficientTree& b) {
    a -= b;
    return a;
  }
  friend CoefficientTree operator*(CoefficientTree a, double factor) {
    a *= factor;
    return a;
  }

  /// Keeps the father block and mother levels j <= cutoff.
  CoefficientTree truncated(int cutoff_level) const;

  // 1-D conveniences.
  void set_father1(int k, double v) { set_father(translate1(k), v); }
  void add_father1(int k, double v) { add_father(translate1(k), v); }
  void set_mother1(int level, int k, double v) {
    set_mother(WaveletIndex{level, translate1(k), 1}, v);
  }
  double mother1(int level, int k) const {
    return mother(WaveletIndex{level, translate1(k), 1});
  }

 private:
  int dim_;
  FatherMap father_;
  std::vector<LevelMap> levels_;
};

/// Coefficient pairing <a, b> = sum alpha alpha' + sum beta beta' over all
/// shared indices.
double inner_product(const CoefficientTree& a, const CoefficientTree& b);

/// Line-oriented text format: `F k... alpha` for father entries and
/// `M j k... eps... beta` for mother entries (k and eps have one integer per
/// dimension), reals with 17 significant digits. A leading `# dim D` comment
/// records the dimension.
std::string to_text(const CoefficientTree& tree);
CoefficientTree tree_from_text(std::string_view text);
void save_tree(const CoefficientTree& tree, const std::string& path);
CoefficientTree load_tree(const std::string& path);

/// FNV-1a hash of the canonical text form (used as sampling provenance).
std::uint64_t tree_hash(const CoefficientTree& tree);

}  // namespace besovdens

#endif  // BESOVDENS_COEFFICIENTS_HPP_
