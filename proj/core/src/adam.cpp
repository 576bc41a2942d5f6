#include "msglance/adam.hpp"

#include <cmath>

#include "msglance/error.hpp"

namespace msglance {

double global_norm(std::span<const std::span<const double>> blocks) {
  double sum = 0.0;
  for (auto block : blocks) {
    for (double g : block) sum += g * g;
  }
  return std::sqrt(sum);
}

double clip_global_norm(std::span<const std::span<double>> blocks, double max_norm) {
  double sum = 0.0;
  for (auto block : blocks) {
    for (double g : block) sum += g * g;
  }
  const double norm = std::sqrt(sum);
  if (norm > max_norm && norm > 0.0) {
    const double scale = max_norm / norm;
    for (auto block : blocks) {
      for (double& g : block) g *= scale;
    }
  }
  return norm;
}

void adam_step(AdamState& state, std::span<const std::span<double>> params,
               std::span<const std::span<const double>> grads) {
  if (params.size() != grads.size()) throw InputError("adam_step: parameter/gradient block count mismatch");
  for (std::size_t b = 0; b < params.size(); ++b) {
    if (params[b].size() != grads[b].size()) throw InputError("adam_step: parameter/gradient shape mismatch");
  }
  if (state.steps_ == 0 && state.m_.empty()) {
    for (auto block : params) {
      state.m_.emplace_back(block.size(), 0.0);
      state.v_.emplace_back(block.size(), 0.0);
    }
  }
  if (state.m_.size() != params.size()) throw InputError("adam_step: optimizer state shape mismatch");
  for (std::size_t b = 0; b < params.size(); ++b) {
    if (state.m_[b].size() != params[b].size()) throw InputError("adam_step: optimizer state shape mismatch");
  }

  const AdamConfig& cfg = state.cfg_;
  ++state.steps_;
  const double t = static_cast<double>(state.steps_);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t b = 0; b < params.size(); ++b) {
    auto p = params[b];
    auto g = grads[b];
    auto& m = state.m_[b];
    auto& v = state.v_[b];
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      p[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
  }
}

}  // namespace msglance
