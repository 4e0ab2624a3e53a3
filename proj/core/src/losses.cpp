#include "gamerep/losses.hpp"

#include <algorithm>
#include <cmath>

#include "gamerep/error.hpp"

namespace gamerep {

PairSet build_pairs(const std::vector<int>& labels) {
  const int b = static_cast<int>(labels.size());
  if (b < 2)
    throw data_error("degenerate-batch", "pair construction needs at least 2 samples");
  PairSet ps;
  for (int i = 0; i < b; ++i)
    for (int j = i + 1; j < b; ++j)
      (labels[i] == labels[j] ? ps.positives : ps.negatives).emplace_back(i, j);
  return ps;
}

LossValue cross_entropy(const Tensor& probs, const std::vector<int>& labels) {
  const std::size_t b = probs.dim(0);
  const std::size_t n = probs.dim(1);
  if (b == 0 || labels.size() != b)
    throw data_error("label-count", "labels must match the batch size");
  LossValue out;
  out.per_term.resize(b);
  double sum = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= n)
      throw data_error("label-range", "label out of range at sample " + std::to_string(i));
    const double p = std::max(probs.at(i, static_cast<std::size_t>(labels[i])), kProbFloor);
    out.per_term[i] = -std::log(p);
    sum += out.per_term[i];
  }
  out.value = sum / static_cast<double>(b);
  return out;
}

Tensor cross_entropy_grad(const Tensor& probs, const std::vector<int>& labels) {
  const std::size_t b = probs.dim(0);
  const std::size_t n = probs.dim(1);
  Tensor grad({b, n});
  for (std::size_t i = 0; i < b; ++i) {
    const std::size_t y = static_cast<std::size_t>(labels.at(i));
    const double p = probs.at(i, y);
    if (p > kProbFloor) grad.at(i, y) = -1.0 / (p * static_cast<double>(b));
  }
  return grad;
}

Tensor softmax_cross_entropy_backward(const Tensor& probs, const std::vector<int>& labels) {
  const std::size_t b = probs.dim(0);
  const std::size_t n = probs.dim(1);
  Tensor grad({b, n});
  const double inv_b = 1.0 / static_cast<double>(b);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < n; ++j) grad.at(i, j) = probs.at(i, j) * inv_b;
    grad.at(i, static_cast<std::size_t>(labels.at(i))) -= inv_b;
  }
  return grad;
}

namespace {

double pair_distance(const Tensor& z, int i, int j) {
  const std::size_t e = z.dim(1);
  double sq = 0.0;
  for (std::size_t k = 0; k < e; ++k) {
    const double d = z.at(static_cast<std::size_t>(i), k) - z.at(static_cast<std::size_t>(j), k);
    sq += d * d;
  }
  return std::sqrt(sq);
}

}  // namespace

LossValue contrastive_max_margin(const Tensor& embeddings, const std::vector<int>& labels,
                                 double margin) {
  if (!(margin > 0.0)) throw config_error("margin", "margin must be positive");
  const PairSet ps = build_pairs(labels);

  LossValue out;
  out.per_term.reserve(ps.total());
  double sum = 0.0;
  for (const auto& [i, j] : ps.positives) {
    const double d = pair_distance(embeddings, i, j);
    const double term = d * d;
    out.per_term.push_back(term);
    sum += term;
  }
  for (const auto& [i, j] : ps.negatives) {
    const double d = pair_distance(embeddings, i, j);
    const double hinge = std::max(0.0, margin - d);
    const double term = hinge * hinge;
    out.per_term.push_back(term);
    sum += term;
  }
  out.value = sum / static_cast<double>(ps.total());
  return out;
}

Tensor contrastive_grad(const Tensor& embeddings, const std::vector<int>& labels,
                        double margin) {
  if (!(margin > 0.0)) throw config_error("margin", "margin must be positive");
  const PairSet ps = build_pairs(labels);
  const std::size_t e = embeddings.dim(1);
  Tensor grad(embeddings.shape());
  const double inv = 1.0 / static_cast<double>(ps.total());

  for (const auto& [i, j] : ps.positives) {
    // d/dz_i |z_i - z_j|^2 = 2 (z_i - z_j)
    for (std::size_t k = 0; k < e; ++k) {
      const double diff = embeddings.at(static_cast<std::size_t>(i), k) -
                          embeddings.at(static_cast<std::size_t>(j), k);
      grad.at(static_cast<std::size_t>(i), k) += 2.0 * diff * inv;
      grad.at(static_cast<std::size_t>(j), k) -= 2.0 * diff * inv;
    }
  }
  for (const auto& [i, j] : ps.negatives) {
    const double d = pair_distance(embeddings, i, j);
    if (d >= margin || d == 0.0) continue;  // hinge inactive / undefined direction
    // d/dz_i max(0, m-d)^2 = -2 (m-d) (z_i - z_j) / d
    const double coef = -2.0 * (margin - d) / d * inv;
    for (std::size_t k = 0; k < e; ++k) {
      const double diff = embeddings.at(static_cast<std::size_t>(i), k) -
                          embeddings.at(static_cast<std::size_t>(j), k);
      grad.at(static_cast<std::size_t>(i), k) += coef * diff;
      grad.at(static_cast<std::size_t>(j), k) -= coef * diff;
    }
  }
  return grad;
}

}  // namespace gamerep
