#include "besovdens/coefficients.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace besovdens {

namespace {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

CoefficientTree::CoefficientTree(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("unsupported dimension");
}

void CoefficientTree::ensure_level(int level) {
  if (level < 0) throw std::invalid_argument("negative level");
  if (level >= static_cast<int>(levels_.size()))
    levels_.resize(static_cast<std::size_t>(level) + 1);
}

double CoefficientTree::father(const Translate& k) const {
  auto it = father_.find(k);
  return it == father_.end() ? 0.0 : it->second;
}

void CoefficientTree::set_father(const Translate& k, double value) {
  if (value == 0.0)
    father_.erase(k);
  else
    father_[k] = value;
}

void CoefficientTree::add_father(const Translate& k, double value) {
  set_father(k, father(k) + value);
}

double CoefficientTree::mother(const WaveletIndex& index) const {
  if (index.level < 0 || index.level >= static_cast<int>(levels_.size()))
    return 0.0;
  const auto& lvl = levels_[static_cast<std::size_t>(index.level)];
  auto it = lvl.find(MotherKey{index.k, index.orientation});
  return it == lvl.end() ? 0.0 : it->second;
}

void CoefficientTree::set_mother(const WaveletIndex& index, double value) {
  if (index.orientation == 0 ||
      index.orientation >= (1u << static_cast<unsigned>(dim_)))
    throw std::invalid_argument("invalid orientation for dimension");
  ensure_level(index.level);
  auto& lvl = levels_[static_cast<std::size_t>(index.level)];
  const MotherKey key{index.k, index.orientation};
  if (value == 0.0)
    lvl.erase(key);
  else
    lvl[key] = value;
}

void CoefficientTree::add_mother(const WaveletIndex& index, double value) {
  set_mother(index, mother(index) + value);
}

const CoefficientTree::LevelMap& CoefficientTree::level(int j) const {
  static const LevelMap kEmpty;
  if (j < 0 || j >= static_cast<int>(levels_.size())) return kEmpty;
  return levels_[static_cast<std::size_t>(j)];
}

std::size_t CoefficientTree::nonzero_count() const {
  std::size_t n = father_.size();
  for (const auto& lvl : levels_) n += lvl.size();
  return n;
}

double CoefficientTree::mass() const {
  double m = 0.0;
  for (const auto& [k, v] : father_) m += v;
  return m;
}

CoefficientTree& CoefficientTree::operator*=(double factor) {
  if (factor == 0.0) {
    father_.clear();
    levels_.clear();
    return *this;
  }
  for (auto& [k, v] : father_) v *= factor;
  for (auto& lvl : levels_)
    for (auto& [k, v] : lvl) v *= factor;
  return *this;
}

CoefficientTree& CoefficientTree::operator+=(const CoefficientTree& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
  for (const auto& [k, v] : other.father_) add_father(k, v);
  for (int j = 0; j < other.level_count(); ++j)
    for (const auto& [key, v] : other.level(j))
      add_mother(WaveletIndex{j, key.k, key.orientation}, v);
  return *this;
}

CoefficientTree& CoefficientTree::operator-=(const CoefficientTree& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
  for (const auto& [k, v] : other.father_) add_father(k, -v);
  for (int j = 0; j < other.level_count(); ++j)
    for (const auto& [key, v] : other.level(j))
      add_mother(WaveletIndex{j, key.k, key.orientation}, -v);
  return *this;
}

CoefficientTree CoefficientTree::truncated(int cutoff_level) const {
  CoefficientTree out(dim_);
  out.father_ = father_;
  const int top = std::min(cutoff_level, max_level());
  for (int j = 0; j <= top; ++j) {
    out.ensure_level(j);
    out.levels_[static_cast<std::size_t>(j)] =
        levels_[static_cast<std::size_t>(j)];
  }
  return out;
}

double inner_product(const CoefficientTree& a, const CoefficientTree& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  double acc = 0.0;
  // Iterate the smaller map of each block.
  const auto& fa = a.father_block();
  const auto& fb = b.father_block();
  if (fa.size() <= fb.size()) {
    for (const auto& [k, v] : fa) acc += v * b.father(k);
  } else {
    for (const auto& [k, v] : fb) acc += v * a.father(k);
  }
  const int levels = std::max(a.level_count(), b.level_count());
  for (int j = 0; j < levels; ++j) {
    const auto& la = a.level(j);
    const auto& lb = b.level(j);
    const auto& small = la.size() <= lb.size() ? la : lb;
    const auto& big = la.size() <= lb.size() ? lb : la;
    for (const auto& [key, v] : small) {
      auto it = big.find(key);
      if (it != big.end()) acc += v * it->second;
    }
  }
  return acc;
}

std::string to_text(const CoefficientTree& tree) {
  std::ostringstream os;
  os << "# dim " << tree.dim() << "\n";
  for (const auto& [k, v] : tree.father_block()) {
    os << 'F';
    for (int d = 0; d < tree.dim(); ++d) os << ' ' << k[d];
    os << ' ' << format_real(v) << "\n";
  }
  for (int j = 0; j <= tree.max_level(); ++j) {
    for (const auto& [key, v] : tree.level(j)) {
      os << "M " << j;
      for (int d = 0; d < tree.dim(); ++d) os << ' ' << key.k[d];
      for (int d = 0; d < tree.dim(); ++d)
        os << ' ' << ((key.orientation >> d) & 1u);
      os << ' ' << format_real(v) << "\n";
    }
  }
  return os.str();
}

CoefficientTree tree_from_text(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  int dim = 1;
  bool dim_seen = false;
  std::vector<std::string> body;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string word;
      if (ls >> word && word == "dim" && (ls >> dim)) dim_seen = true;
      continue;
    }
    body.push_back(line);
  }
  if (!dim_seen && !body.empty()) {
    // Infer the dimension from the token count of the first record.
    std::istringstream ls(body.front());
    std::string tok;
    int tokens = 0;
    while (ls >> tok) ++tokens;
    if (body.front()[0] == 'F')
      dim = tokens - 2;
    else
      dim = (tokens - 3) / 2;
  }
  CoefficientTree tree(dim);
  for (const auto& record : body) {
    std::istringstream ls(record);
    char tag;
    ls >> tag;
    if (tag == 'F') {
      Translate k{};
      for (int d = 0; d < dim; ++d) ls >> k[d];
      double v;
      ls >> v;
      if (!ls) throw std::invalid_argument("malformed father record");
      tree.add_father(k, v);
    } else if (tag == 'M') {
      int j;
      ls >> j;
      Translate k{};
      for (int d = 0; d < dim; ++d) ls >> k[d];
      unsigned eps = 0;
      for (int d = 0; d < dim; ++d) {
        int bit;
        ls >> bit;
        eps |= static_cast<unsigned>(bit & 1) << d;
      }
      double v;
      ls >> v;
      if (!ls) throw std::invalid_argument("malformed mother record");
      tree.add_mother(WaveletIndex{j, k, eps}, v);
    } else {
      throw std::invalid_argument("unknown record tag in coefficient file");
    }
  }
  return tree;
}

void save_tree(const CoefficientTree& tree, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << to_text(tree);
}

CoefficientTree load_tree(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return tree_from_text(buf.str());
}

std::uint64_t tree_hash(const CoefficientTree& tree) {
  const std::string text = to_text(tree);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace besovdens
