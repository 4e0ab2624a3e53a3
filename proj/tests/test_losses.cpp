#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "gamerep/error.hpp"
#include "gamerep/losses.hpp"
#include "gamerep/rng.hpp"
#include "test_util.hpp"

using namespace gamerep;

namespace {

// Independent oracle: walks every unordered pair from scratch, no PairSet.
double contrastive_brute_force(const Tensor& z, const std::vector<int>& labels,
                               double margin) {
  const std::size_t b = z.dim(0);
  const std::size_t e = z.dim(1);
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = i + 1; j < b; ++j) {
      double sq = 0.0;
      for (std::size_t k = 0; k < e; ++k) {
        const double diff = z.at(i, k) - z.at(j, k);
        sq += diff * diff;
      }
      const double dist = std::sqrt(sq);
      if (labels[i] == labels[j]) {
        sum += sq;
      } else {
        const double hinge = std::max(0.0, margin - dist);
        sum += hinge * hinge;
      }
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

Tensor random_unit_rows(std::size_t b, std::size_t e, std::uint64_t seed) {
  Tensor z({b, e});
  Rng rng(seed);
  for (std::size_t i = 0; i < b; ++i) {
    double sq = 0.0;
    for (std::size_t k = 0; k < e; ++k) {
      z.at(i, k) = rng.normal();
      sq += z.at(i, k) * z.at(i, k);
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (std::size_t k = 0; k < e; ++k) z.at(i, k) *= inv;
  }
  return z;
}

Tensor random_prob_rows(std::size_t b, std::size_t n, std::uint64_t seed) {
  Tensor p({b, n});
  Rng rng(seed);
  for (std::size_t i = 0; i < b; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      p.at(i, j) = std::exp(rng.normal());
      sum += p.at(i, j);
    }
    for (std::size_t j = 0; j < n; ++j) p.at(i, j) /= sum;
  }
  return p;
}

}  // namespace

TEST_CASE("build_pairs enumerates and classifies all pairs") {
  // labels (A, A, B)
  const PairSet ps = build_pairs({0, 0, 1});
  REQUIRE(ps.positives.size() == 1);
  CHECK(ps.positives[0] == std::pair{0, 1});
  REQUIRE(ps.negatives.size() == 2);
  CHECK(ps.negatives[0] == std::pair{0, 2});
  CHECK(ps.negatives[1] == std::pair{1, 2});

  const PairSet all_same = build_pairs({2, 2, 2, 2});
  CHECK(all_same.positives.size() == 6);
  CHECK(all_same.negatives.empty());

  const PairSet all_diff = build_pairs({0, 1, 2, 3});
  CHECK(all_diff.positives.empty());
  CHECK(all_diff.negatives.size() == 6);
}

TEST_CASE("build_pairs rejects a batch of one") {
  CHECK_THROWS_AS(build_pairs({0}), Error);
}

TEST_CASE("cross entropy on known distributions") {
  // one-hot correct
  Tensor onehot({1, 3});
  onehot.at(0, 1) = 1.0;
  CHECK(cross_entropy(onehot, {1}).value == doctest::Approx(0.0).epsilon(1e-9));

  // uniform over 10 classes -> ln 10
  Tensor uniform({1, 10});
  for (std::size_t j = 0; j < 10; ++j) uniform.at(0, j) = 0.1;
  CHECK(cross_entropy(uniform, {4}).value ==
        doctest::Approx(std::log(10.0)).epsilon(1e-12));

  // (0.5, 0.5) true class 0 -> ln 2
  Tensor half({1, 2});
  half.at(0, 0) = 0.5;
  half.at(0, 1) = 0.5;
  CHECK(cross_entropy(half, {0}).value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("cross entropy rejects bad labels and is non-negative") {
  Tensor p = random_prob_rows(4, 3, 1);
  CHECK_THROWS_AS(cross_entropy(p, {0, 1, 2, 3}), Error);
  CHECK_THROWS_AS(cross_entropy(p, {0, 1, -1, 0}), Error);
  CHECK(cross_entropy(p, {0, 1, 2, 0}).value >= 0.0);
}

TEST_CASE("contrastive loss on pinned fixtures") {
  // Same-class coincident pair contributes 0.
  {
    Tensor z({2, 2});
    z.at(0, 0) = 1.0;
    z.at(1, 0) = 1.0;
    CHECK(contrastive_max_margin(z, {0, 0}, 1.0).value == doctest::Approx(0.0));
  }
  // Different-class coincident pair contributes max(0, 1-0)^2 = 1.
  {
    Tensor z({2, 2});
    z.at(0, 0) = 1.0;
    z.at(1, 0) = 1.0;
    CHECK(contrastive_max_margin(z, {0, 1}, 1.0).value == doctest::Approx(1.0));
  }
  // Different-class orthogonal unit vectors: distance sqrt(2) > margin -> 0.
  {
    Tensor z({2, 2});
    z.at(0, 0) = 1.0;
    z.at(1, 1) = 1.0;
    CHECK(contrastive_max_margin(z, {0, 1}, 1.0).value == doctest::Approx(0.0));
  }
}

TEST_CASE("three-point batch against the brute-force oracle") {
  // z0 = (1,0) A, z1 = (0,1) A, z2 = (-1,0) B. Positive pair distance^2 = 2;
  // negative distances 2 and sqrt(2), both beyond the margin, so the mean
  // over the three pairs is 2/3.
  Tensor z({3, 2});
  z.at(0, 0) = 1.0;
  z.at(1, 1) = 1.0;
  z.at(2, 0) = -1.0;
  const std::vector<int> labels{0, 0, 1};
  const LossValue loss = contrastive_max_margin(z, labels, 1.0);
  CHECK(loss.value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(loss.value ==
        doctest::Approx(contrastive_brute_force(z, labels, 1.0)).epsilon(1e-12));
  REQUIRE(loss.per_term.size() == 3);
  CHECK(loss.per_term[0] == doctest::Approx(2.0));   // positive (0,1)
  CHECK(loss.per_term[1] == doctest::Approx(0.0));   // negative (0,2)
  CHECK(loss.per_term[2] == doctest::Approx(0.0));   // negative (1,2)
}

TEST_CASE("contrastive matches brute force on random batches") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const std::size_t b = 2 + rng.below(10);
    Tensor z = random_unit_rows(b, 8, seed + 100);
    std::vector<int> labels;
    for (std::size_t i = 0; i < b; ++i) labels.push_back(static_cast<int>(rng.below(3)));
    const double expect = contrastive_brute_force(z, labels, 1.0);
    CHECK(contrastive_max_margin(z, labels, 1.0).value ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("contrastive loss is non-negative and zero only at the optimum") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Tensor z = random_unit_rows(6, 4, seed);
    const double v = contrastive_max_margin(z, {0, 0, 1, 1, 2, 2}, 1.0).value;
    CHECK(v >= 0.0);
  }
  // Optimum: identical positives, negatives at distance >= margin.
  Tensor z({4, 2});
  z.at(0, 0) = 1.0;
  z.at(1, 0) = 1.0;
  z.at(2, 0) = -1.0;
  z.at(3, 0) = -1.0;
  CHECK(contrastive_max_margin(z, {0, 0, 1, 1}, 1.0).value == doctest::Approx(0.0));
}

TEST_CASE("loss is invariant under batch permutation and common rotation") {
  const Tensor z = random_unit_rows(8, 4, 42);
  const std::vector<int> labels{0, 1, 0, 2, 1, 2, 0, 1};
  const double base = contrastive_max_margin(z, labels, 1.0).value;

  // Permutation.
  std::vector<std::size_t> perm{3, 1, 7, 0, 5, 2, 6, 4};
  Tensor zp({8, 4});
  std::vector<int> lp(8);
  for (std::size_t i = 0; i < 8; ++i) {
    lp[i] = labels[perm[i]];
    for (std::size_t k = 0; k < 4; ++k) zp.at(i, k) = z.at(perm[i], k);
  }
  CHECK(contrastive_max_margin(zp, lp, 1.0).value == doctest::Approx(base).epsilon(1e-12));

  // Rotation in the (0,1) plane, a common orthogonal map.
  const double theta = 0.83;
  Tensor zr = z;
  for (std::size_t i = 0; i < 8; ++i) {
    const double a = z.at(i, 0), b = z.at(i, 1);
    zr.at(i, 0) = std::cos(theta) * a - std::sin(theta) * b;
    zr.at(i, 1) = std::sin(theta) * a + std::cos(theta) * b;
  }
  CHECK(contrastive_max_margin(zr, labels, 1.0).value ==
        doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("all-same-label batch reduces to mean positive squared distance") {
  const Tensor z = random_unit_rows(5, 3, 9);
  const std::vector<int> labels(5, 7);
  double expect = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      double sq = 0.0;
      for (std::size_t k = 0; k < 3; ++k) {
        const double d = z.at(i, k) - z.at(j, k);
        sq += d * d;
      }
      expect += sq;
      ++count;
    }
  expect /= count;
  CHECK(contrastive_max_margin(z, labels, 1.0).value ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("degenerate batches and bad margins are rejected") {
  Tensor z({1, 2});
  CHECK_THROWS_AS(contrastive_max_margin(z, {0}, 1.0), Error);
  Tensor z2 = random_unit_rows(3, 2, 1);
  CHECK_THROWS_AS(contrastive_max_margin(z2, {0, 0, 1}, 0.0), Error);
  CHECK_THROWS_AS(contrastive_max_margin(z2, {0, 0, 1}, -1.0), Error);
}

TEST_CASE("analytic gradients match finite differences (100 random 8-sample batches)") {
  double worst_con = 0.0, worst_ce = 0.0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    Rng rng(trial * 7 + 1);
    std::vector<int> labels;
    for (int i = 0; i < 8; ++i) labels.push_back(static_cast<int>(rng.below(3)));

    Tensor z = random_unit_rows(8, 6, trial + 500);
    const Tensor dz = contrastive_grad(z, labels, 1.0);
    worst_con = std::max(
        worst_con, testutil::max_tensor_grad_error(z, dz, [&](const Tensor& t) {
          return contrastive_max_margin(t, labels, 1.0).value;
        }));

    Tensor p = random_prob_rows(8, 3, trial + 900);
    const Tensor dp = cross_entropy_grad(p, labels);
    worst_ce = std::max(
        worst_ce, testutil::max_tensor_grad_error(p, dp, [&](const Tensor& t) {
          return cross_entropy(t, labels).value;
        }));
  }
  CHECK(worst_con < 1e-4);
  CHECK(worst_ce < 1e-4);
}
