#include "gamerep/silhouette.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "gamerep/error.hpp"

namespace gamerep {

SilhouetteReport silhouette(const Tensor& reps, const std::vector<int>& labels) {
  const std::size_t n = reps.dim(0);
  const std::size_t d = reps.dim(1);
  if (n < 2) throw data_error("too-few-points", "silhouette needs at least 2 points");
  if (labels.size() != n)
    throw data_error("label-count", "labels must match the number of rows");

  std::map<int, std::size_t> cluster_sizes;
  for (int y : labels) cluster_sizes[y] += 1;
  if (cluster_sizes.size() < 2)
    throw data_error("single-label", "silhouette is undefined for a single cluster");

  SilhouetteReport report;
  report.points.resize(n);

  // Row-at-a-time distance accumulation keeps memory at O(n) instead of an
  // n x n matrix.
  std::map<int, double> sums;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [label, count] : cluster_sizes) sums[label] = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double sq = 0.0;
      const double* ri = reps.data() + i * d;
      const double* rj = reps.data() + j * d;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = ri[k] - rj[k];
        sq += diff * diff;
      }
      sums[labels[j]] += std::sqrt(sq);
    }

    SilhouettePoint& pt = report.points[i];
    const std::size_t own = cluster_sizes[labels[i]];
    if (own <= 1) {
      // Singleton cluster: coefficient fixed at 0 by convention.
      pt.a = 0.0;
      pt.b = 0.0;
      pt.s = 0.0;
      continue;
    }
    pt.a = sums[labels[i]] / static_cast<double>(own - 1);
    pt.b = std::numeric_limits<double>::infinity();
    for (const auto& [label, count] : cluster_sizes) {
      if (label == labels[i]) continue;
      pt.b = std::min(pt.b, sums[label] / static_cast<double>(count));
    }
    const double denom = std::max(pt.a, pt.b);
    pt.s = denom > 0.0 ? (pt.b - pt.a) / denom : 0.0;
  }

  double total = 0.0;
  std::map<int, std::pair<double, std::size_t>> per_label;
  for (std::size_t i = 0; i < n; ++i) {
    total += report.points[i].s;
    auto& [sum, count] = per_label[labels[i]];
    sum += report.points[i].s;
    count += 1;
  }
  report.score = total / static_cast<double>(n);
  for (const auto& [label, agg] : per_label)
    report.per_label.emplace_back(label, agg.first / static_cast<double>(agg.second));
  return report;
}

}  // namespace gamerep
