#include "gamerep/metrics.hpp"

#include "gamerep/error.hpp"

namespace gamerep {

std::vector<int> argmax_predictions(const Tensor& probs) {
  const std::size_t b = probs.dim(0);
  const std::size_t n = probs.dim(1);
  std::vector<int> preds(b);
  for (std::size_t i = 0; i < b; ++i) {
    int best = 0;
    for (std::size_t j = 1; j < n; ++j)
      if (probs.at(i, j) > probs.at(i, static_cast<std::size_t>(best)))
        best = static_cast<int>(j);
    preds[i] = best;
  }
  return preds;
}

double accuracy(const std::vector<int>& preds, const std::vector<int>& labels) {
  if (preds.empty() || preds.size() != labels.size())
    throw data_error("label-count", "predictions and labels must be non-empty and equal-sized");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i)
    if (preds[i] == labels[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(preds.size());
}

double accuracy(const Tensor& probs, const std::vector<int>& labels) {
  return accuracy(argmax_predictions(probs), labels);
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

std::int64_t ConfusionMatrix::diagonal() const {
  std::int64_t t = 0;
  for (int i = 0; i < classes; ++i) t += at(i, i);
  return t;
}

std::vector<double> ConfusionMatrix::row_percent() const {
  std::vector<double> out(counts.size(), 0.0);
  for (int t = 0; t < classes; ++t) {
    std::int64_t row = 0;
    for (int p = 0; p < classes; ++p) row += at(t, p);
    if (row == 0) continue;
    for (int p = 0; p < classes; ++p)
      out[static_cast<std::size_t>(t) * classes + p] =
          100.0 * static_cast<double>(at(t, p)) / static_cast<double>(row);
  }
  return out;
}

ConfusionMatrix confusion(const std::vector<int>& preds, const std::vector<int>& labels,
                          int classes) {
  if (preds.empty() || preds.size() != labels.size())
    throw data_error("label-count", "predictions and labels must be non-empty and equal-sized");
  ConfusionMatrix m;
  m.classes = classes;
  m.counts.assign(static_cast<std::size_t>(classes) * classes, 0);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= classes || preds[i] < 0 || preds[i] >= classes)
      throw data_error("label-range", "class id out of range in confusion input");
    m.at(labels[i], preds[i]) += 1;
  }
  return m;
}

ConfusionMatrix confusion(const Tensor& probs, const std::vector<int>& labels, int classes) {
  return confusion(argmax_predictions(probs), labels, classes);
}

}  // namespace gamerep
