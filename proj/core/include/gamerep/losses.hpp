#pragma once

#include <utility>
#include <vector>

#include "gamerep/tensor.hpp"

namespace gamerep {

/// All unordered in-batch index pairs, partitioned by label equality.
struct PairSet {
  std::vector<std::pair<int, int>> positives;  // y_i == y_j, i < j
  std::vector<std::pair<int, int>> negatives;  // y_i != y_j, i < j

  std::size_t total() const { return positives.size() + negatives.size(); }
};

/// Enumerates all C(b,2) pairs. Throws degenerate-batch for b < 2.
PairSet build_pairs(const std::vector<int>& labels);

struct LossValue {
  double value = 0.0;
  std::vector<double> per_term;  // per-sample (cross entropy) or per-pair
};

/// Mean over the batch of -log(p_true), probabilities floored at 1e-12
/// before the log. Throws on out-of-range labels or an empty batch.
LossValue cross_entropy(const Tensor& probs, const std::vector<int>& labels);

/// Gradient of cross_entropy with respect to its probability inputs
/// (zero where the floor is active).
Tensor cross_entropy_grad(const Tensor& probs, const std::vector<int>& labels);

/// Gradient of mean -log(softmax(logits))[true] with respect to the logits:
/// (probs - onehot) / b. This is the training path; identical to chaining
/// cross_entropy_grad through the softmax Jacobian whenever p_true is above
/// the floor.
Tensor softmax_cross_entropy_backward(const Tensor& probs, const std::vector<int>& labels);

/// Max-margin contrastive loss on unit-norm embeddings: positive pairs
/// contribute squared distance, negative pairs max(0, margin - distance)^2;
/// the value is the mean over all pairs. per_term lists positives then
/// negatives in build_pairs order.
LossValue contrastive_max_margin(const Tensor& embeddings, const std::vector<int>& labels,
                                 double margin);

/// Analytic gradient of contrastive_max_margin with respect to the
/// embeddings. A coincident negative pair (distance exactly 0) contributes a
/// zero direction.
Tensor contrastive_grad(const Tensor& embeddings, const std::vector<int>& labels,
                        double margin);

constexpr double kProbFloor = 1e-12;

}  // namespace gamerep
