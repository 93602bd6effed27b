#include <doctest.h>

#include <cmath>

#include "besovdens/coefficients.hpp"
#include "besovdens/sampling.hpp"

using namespace besovdens;

namespace {

CoefficientTree random_tree(SplitMix64& rng, int max_level, int entries) {
  CoefficientTree t(1);
  for (int i = 0; i < entries; ++i) {
    const double v = rng.uniform() * 2.0 - 1.0;
    if (rng.next() % 4 == 0) {
      t.add_father1(static_cast<int>(rng.next() % 5) - 2, v);
    } else {
      const int j = static_cast<int>(rng.next() % (max_level + 1));
      const int k = static_cast<int>(rng.next() % 16) - 8;
      t.add_mother(WaveletIndex{j, translate1(k), 1}, v);
    }
  }
  return t;
}

}  // namespace

TEST_CASE("zero coefficients are not stored") {
  CoefficientTree t(1);
  t.set_father1(0, 1.5);
  t.set_father1(0, 0.0);
  CHECK(t.father_block().empty());
  t.set_mother1(2, 1, 0.5);
  t.add_mother(WaveletIndex{2, translate1(1), 1}, -0.5);
  CHECK(t.level(2).empty());
  CHECK(t.empty());
}

TEST_CASE("mass is the father sum") {
  CoefficientTree t(1);
  t.set_father1(-1, 0.5);
  t.set_father1(0, 0.5);
  t.set_mother1(3, 2, 0.7);
  CHECK(t.mass() == doctest::Approx(1.0));
}

TEST_CASE("truncation keeps levels up to the cutoff") {
  CoefficientTree t(1);
  t.set_father1(0, 1.0);
  for (int j = 0; j <= 5; ++j) t.set_mother1(j, 0, 1.0);
  const CoefficientTree cut = t.truncated(2);
  CHECK(cut.max_level() == 2);
  CHECK(cut.mother1(2, 0) == 1.0);
  CHECK(cut.mother1(3, 0) == 0.0);
}

TEST_CASE("serialization round trip is exact") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const CoefficientTree t = random_tree(rng, 6, 20);
    const CoefficientTree back = tree_from_text(to_text(t));
    CHECK(back.dim() == t.dim());
    CHECK(to_text(back) == to_text(t));
    // Entrywise bit-exact: %.17g round-trips doubles.
    for (const auto& [k, v] : t.father_block()) CHECK(back.father(k) == v);
    for (int j = 0; j <= t.max_level(); ++j)
      for (const auto& [key, v] : t.level(j))
        CHECK(back.mother(WaveletIndex{j, key.k, key.orientation}) == v);
  }
}

TEST_CASE("serialization of 2-D trees records orientations") {
  CoefficientTree t(2);
  t.set_father(Translate{1, -2}, 0.25);
  t.set_mother(WaveletIndex{1, Translate{0, 1}, 3}, -0.5);
  const CoefficientTree back = tree_from_text(to_text(t));
  CHECK(back.dim() == 2);
  CHECK(back.father(Translate{1, -2}) == 0.25);
  CHECK(back.mother(WaveletIndex{1, Translate{0, 1}, 3}) == -0.5);
}

TEST_CASE("inner product pairs shared indices") {
  CoefficientTree a(1), b(1);
  a.set_father1(0, 2.0);
  a.set_mother1(1, 0, 3.0);
  b.set_father1(0, 0.5);
  b.set_mother1(1, 0, -1.0);
  b.set_mother1(2, 4, 10.0);
  CHECK(inner_product(a, b) == doctest::Approx(2.0 * 0.5 - 3.0));
  CHECK(inner_product(a, b) == inner_product(b, a));
}

TEST_CASE("tree hash changes with content") {
  CoefficientTree a(1), b(1);
  a.set_father1(0, 1.0);
  b.set_father1(0, 1.0 + 1e-15);
  CHECK(tree_hash(a) != tree_hash(b));
  CHECK(tree_hash(a) == tree_hash(tree_from_text(to_text(a))));
}

TEST_CASE("arithmetic operators") {
  SplitMix64 rng(5);
  const CoefficientTree a = random_tree(rng, 4, 12);
  const CoefficientTree b = random_tree(rng, 4, 12);
  const CoefficientTree sum = a + b;
  CHECK(inner_product(sum, sum) ==
        doctest::Approx(inner_product(a, a) + 2 * inner_product(a, b) +
                        inner_product(b, b)));
  const CoefficientTree zero = a - a;
  CHECK(zero.empty());
}
