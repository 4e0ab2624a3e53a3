#pragma once

#include <cstdint>
#include <vector>

#include "gamerep/tensor.hpp"

namespace gamerep {

/// Row argmax with ties broken toward the lowest class id.
std::vector<int> argmax_predictions(const Tensor& probs);

/// Fraction of samples whose argmax matches the label.
double accuracy(const std::vector<int>& preds, const std::vector<int>& labels);
double accuracy(const Tensor& probs, const std::vector<int>& labels);

/// Row = true genre, column = predicted genre.
struct ConfusionMatrix {
  int classes = 0;
  std::vector<std::int64_t> counts;  // classes * classes, row-major

  std::int64_t& at(int t, int p) { return counts[static_cast<std::size_t>(t) * classes + p]; }
  std::int64_t at(int t, int p) const {
    return counts[static_cast<std::size_t>(t) * classes + p];
  }
  std::int64_t total() const;
  std::int64_t diagonal() const;
  /// Rows scaled to percentages (sum 100 per non-empty row).
  std::vector<double> row_percent() const;
};

ConfusionMatrix confusion(const std::vector<int>& preds, const std::vector<int>& labels,
                          int classes);
ConfusionMatrix confusion(const Tensor& probs, const std::vector<int>& labels, int classes);

}  // namespace gamerep
