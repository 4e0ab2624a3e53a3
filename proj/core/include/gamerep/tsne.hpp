#pragma once

#include <cstdint>
#include <vector>

#include "gamerep/tensor.hpp"

namespace gamerep {

struct TsneConfig {
  double perplexity = 30.0;
  int iterations = 1000;
  double learning_rate = 200.0;
  double early_exaggeration = 12.0;
  int exaggeration_iters = 250;
  double momentum_initial = 0.5;
  double momentum_final = 0.8;  // takes over after exaggeration_iters
  std::uint64_t seed = 0;
};

/// Perplexity-calibrated affinities. Each conditional distribution's Gaussian
/// precision is found by binary search (at most 50 halvings) so that its
/// Shannon entropy matches log2(perplexity) within 1e-4 bits; the joint P is
/// the symmetrized, unit-sum average.
struct TsneAffinities {
  Tensor p;                            // n x n, symmetric, zero diagonal, sums to 1
  std::vector<double> betas;           // per-point precisions 1/(2 sigma^2)
  std::vector<double> entropy_error;   // |H_i - log2(perplexity)| in bits
};

TsneAffinities tsne_affinities(const Tensor& reps, double perplexity);

struct TsneResult {
  Tensor coords;                 // n x 2, recentered to mean zero
  std::vector<double> kl_trace;  // KL(P || Q) against the plain P per iteration
};

/// Exact O(n^2) projection: Student-t low-dimensional kernel, momentum
/// gradient descent on KL(P||Q), early exaggeration for the first phase.
/// Deterministic given cfg.seed. Requires n >= 10 and 1 < perplexity < n/3.
TsneResult tsne(const Tensor& reps, const TsneConfig& cfg);

}  // namespace gamerep
