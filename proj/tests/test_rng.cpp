#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include "gamerep/rng.hpp"

using namespace gamerep;

TEST_CASE("identical seeds give identical streams") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.u64() == b.u64());
  }
  Rng c(42), d(43);
  bool differ = false;
  for (int i = 0; i < 10; ++i) differ |= (c.u64() != d.u64());
  CHECK(differ);
}

TEST_CASE("uniform stays in [0,1) and fills the range") {
  Rng rng(7);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("below(n) covers all residues") {
  Rng rng(3);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) counts[rng.below(7)] += 1;
  for (int c : counts) CHECK(c > 700);
}

TEST_CASE("normal has roughly unit variance") {
  Rng rng(11);
  double sum = 0.0, sq = 0.0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("shuffle is a permutation and seed-stable") {
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  std::vector<int> w = v;
  Rng a(5), b(5);
  a.shuffle(v);
  b.shuffle(w);
  CHECK(v == w);
  std::sort(w.begin(), w.end());
  for (int i = 0; i < 100; ++i) CHECK(w[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("derive_seed separates streams") {
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
}
