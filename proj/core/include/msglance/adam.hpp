#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace msglance {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Moment accumulators for a list of parameter blocks. Shapes are fixed by the
/// first step.
class AdamState {
 public:
  explicit AdamState(AdamConfig cfg = {}) : cfg_(cfg) {}

  const AdamConfig& config() const noexcept { return cfg_; }
  std::size_t step_count() const noexcept { return steps_; }
  const std::vector<std::vector<double>>& first_moments() const noexcept { return m_; }
  const std::vector<std::vector<double>>& second_moments() const noexcept { return v_; }

 private:
  friend void adam_step(AdamState&, std::span<const std::span<double>>,
                        std::span<const std::span<const double>>);

  AdamConfig cfg_;
  std::size_t steps_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

double global_norm(std::span<const std::span<const double>> blocks);

/// Scales all blocks so their joint L2 norm is at most max_norm. Returns the
/// norm before clipping.
double clip_global_norm(std::span<const std::span<double>> blocks, double max_norm);

/// One bias-corrected Adam update. Throws InputError on shape mismatch.
void adam_step(AdamState& state, std::span<const std::span<double>> params,
               std::span<const std::span<const double>> grads);

}  // namespace msglance
