#include "gamerep/adam.hpp"

#include <cmath>

#include "gamerep/error.hpp"

namespace gamerep {

OptimizerState OptimizerState::zeros_like(const Parameters& p) {
  OptimizerState s;
  s.m.reserve(p.entries.size());
  s.v.reserve(p.entries.size());
  for (const auto& e : p.entries) {
    s.m.emplace_back(e.value.shape());
    s.v.emplace_back(e.value.shape());
  }
  return s;
}

void adam_step(Parameters& params, const Gradients& grads, OptimizerState& state,
               double lr, const AdamConfig& cfg) {
  if (grads.tensors.size() != params.entries.size() ||
      state.m.size() != params.entries.size())
    throw data_error("optimizer-shape", "gradient/state tensors do not match parameters");

  state.step += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));

  for (std::size_t t = 0; t < params.entries.size(); ++t) {
    auto& entry = params.entries[t];
    if (!params.trainable(entry.group)) continue;
    const Tensor& g = grads.tensors[t];
    if (!g.same_shape(entry.value))
      throw data_error("optimizer-shape", "gradient shape mismatch for '" + entry.name + "'");
    if (!g.all_finite())
      throw numeric_error("non-finite-gradient",
                          "non-finite gradient in tensor '" + entry.name + "'");
    Tensor& m = state.m[t];
    Tensor& v = state.v[t];
    for (std::size_t i = 0; i < g.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      entry.value[i] -= lr * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
  }
}

}  // namespace gamerep
