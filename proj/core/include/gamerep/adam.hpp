#pragma once

#include <cstdint>
#include <vector>

#include "gamerep/model.hpp"

namespace gamerep {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First/second moment estimates, aligned with Parameters::entries.
struct OptimizerState {
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  long step = 0;

  static OptimizerState zeros_like(const Parameters& p);
};

/// One bias-corrected Adam update. Only tensors whose group is flagged
/// trainable are touched (their moments included); the step count advances
/// regardless. Throws a numeric error naming the tensor on non-finite
/// gradients.
void adam_step(Parameters& params, const Gradients& grads, OptimizerState& state,
               double lr, const AdamConfig& cfg = {});

}  // namespace gamerep
