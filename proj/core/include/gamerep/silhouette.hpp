#pragma once

#include <utility>
#include <vector>

#include "gamerep/tensor.hpp"

namespace gamerep {

struct SilhouettePoint {
  double a = 0.0;  // mean distance to own cluster (self excluded)
  double b = 0.0;  // mean distance to the nearest other cluster
  double s = 0.0;  // (b - a) / max(a, b); 0 when max(a,b)=0 or singleton
};

struct SilhouetteReport {
  double score = 0.0;  // mean of per-point coefficients
  std::vector<std::pair<int, double>> per_label;  // label -> mean s, sorted by label
  std::vector<SilhouettePoint> points;
};

/// Silhouette over Euclidean distances, exact O(n^2). Requires n >= 2 and at
/// least two distinct labels. Points in singleton clusters score 0, as does
/// the fully degenerate a = b = 0 case.
SilhouetteReport silhouette(const Tensor& reps, const std::vector<int>& labels);

}  // namespace gamerep
