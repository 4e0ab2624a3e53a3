#include "gamerep/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gamerep/error.hpp"
#include "gamerep/rng.hpp"

namespace gamerep {

namespace {

constexpr double kTiny = 1e-12;

Tensor squared_distances(const Tensor& x) {
  const std::size_t n = x.dim(0);
  const std::size_t d = x.dim(1);
  Tensor dist({n, n});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double sq = 0.0;
      const double* xi = x.data() + i * d;
      const double* xj = x.data() + j * d;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = xi[k] - xj[k];
        sq += diff * diff;
      }
      dist.at(i, j) = sq;
      dist.at(j, i) = sq;
    }
  }
  return dist;
}

// Conditional distribution and its Shannon entropy (bits) for one row at a
// given precision. Probabilities are written into `row` (self stays 0).
double conditional_row(const Tensor& d2, std::size_t i, double beta, double* row) {
  const std::size_t n = d2.dim(0);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    row[j] = (j == i) ? 0.0 : std::exp(-beta * d2.at(i, j));
    sum += row[j];
  }
  if (sum <= 0.0) {
    // All mass underflowed; fall back to uniform over the others.
    for (std::size_t j = 0; j < n; ++j) row[j] = (j == i) ? 0.0 : 1.0;
    sum = static_cast<double>(n - 1);
  }
  double entropy = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    row[j] /= sum;
    if (row[j] > kTiny) entropy -= row[j] * std::log2(row[j]);
  }
  return entropy;
}

}  // namespace

TsneAffinities tsne_affinities(const Tensor& reps, double perplexity) {
  const std::size_t n = reps.dim(0);
  if (n < 2) throw data_error("too-few-points", "affinities need at least 2 points");
  if (!(perplexity > 1.0) || !(perplexity < static_cast<double>(n) / 3.0))
    throw config_error("perplexity",
                       "perplexity must satisfy 1 < perplexity < n/3 (n = " +
                           std::to_string(n) + ")");

  const Tensor d2 = squared_distances(reps);
  const double target = std::log2(perplexity);

  TsneAffinities out;
  out.p = Tensor({n, n});
  out.betas.assign(n, 1.0);
  out.entropy_error.assign(n, 0.0);

  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    double beta = 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double entropy = conditional_row(d2, i, beta, row.data());
    for (int it = 0; it < 50 && std::abs(entropy - target) > 1e-4; ++it) {
      if (entropy > target) {
        // Too flat: raise the precision.
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
      entropy = conditional_row(d2, i, beta, row.data());
    }
    out.betas[i] = beta;
    out.entropy_error[i] = std::abs(entropy - target);
    for (std::size_t j = 0; j < n; ++j) out.p.at(i, j) = row[j];
  }

  // Symmetrize: P_ij = (p_{j|i} + p_{i|j}) / (2n); total mass is exactly 1.
  const double inv = 1.0 / (2.0 * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = (out.p.at(i, j) + out.p.at(j, i)) * inv;
      out.p.at(i, j) = v;
      out.p.at(j, i) = v;
    }
  for (std::size_t i = 0; i < n; ++i) out.p.at(i, i) = 0.0;
  return out;
}

TsneResult tsne(const Tensor& reps, const TsneConfig& cfg) {
  const std::size_t n = reps.dim(0);
  if (n < 10) throw data_error("too-few-points", "projection needs at least 10 points");
  if (cfg.iterations < 1) throw config_error("tsne-iterations", "iterations must be >= 1");

  TsneAffinities aff = tsne_affinities(reps, cfg.perplexity);
  Tensor& p = aff.p;

  Rng rng(derive_seed(cfg.seed, {0x74736e65}));
  Tensor y({n, 2});
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = rng.normal() * 1e-4;

  Tensor velocity({n, 2});
  Tensor w({n, n});  // Student-t kernel weights
  Tensor grad({n, 2});

  TsneResult result;
  result.kl_trace.reserve(static_cast<std::size_t>(cfg.iterations));

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    const bool exaggerated = iter < cfg.exaggeration_iters;
    const double p_scale = exaggerated ? cfg.early_exaggeration : 1.0;
    const double momentum =
        iter < cfg.exaggeration_iters ? cfg.momentum_initial : cfg.momentum_final;

    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w.at(i, i) = 0.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dy0 = y.at(i, 0) - y.at(j, 0);
        const double dy1 = y.at(i, 1) - y.at(j, 1);
        const double v = 1.0 / (1.0 + dy0 * dy0 + dy1 * dy1);
        w.at(i, j) = v;
        w.at(j, i) = v;
        wsum += 2.0 * v;
      }
    }

    grad.fill(0.0);
    double kl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double q = std::max(w.at(i, j) / wsum, kTiny);
        const double pij = p.at(i, j);
        if (pij > kTiny && j > i) kl += 2.0 * pij * std::log(pij / q);
        const double coef = 4.0 * (p_scale * pij - q) * w.at(i, j);
        grad.at(i, 0) += coef * (y.at(i, 0) - y.at(j, 0));
        grad.at(i, 1) += coef * (y.at(i, 1) - y.at(j, 1));
      }
    }
    result.kl_trace.push_back(kl);

    for (std::size_t i = 0; i < y.size(); ++i) {
      velocity[i] = momentum * velocity[i] - cfg.learning_rate * grad[i];
      y[i] += velocity[i];
    }

    // Recenter each iteration (and thereby at the end).
    double mean0 = 0.0, mean1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mean0 += y.at(i, 0);
      mean1 += y.at(i, 1);
    }
    mean0 /= static_cast<double>(n);
    mean1 /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      y.at(i, 0) -= mean0;
      y.at(i, 1) -= mean1;
    }
  }

  if (!y.all_finite())
    throw numeric_error("tsne-diverged", "projection produced non-finite coordinates");
  result.coords = std::move(y);
  return result;
}

}  // namespace gamerep
