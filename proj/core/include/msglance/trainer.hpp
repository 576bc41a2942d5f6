#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "msglance/adam.hpp"
#include "msglance/glance.hpp"
#include "msglance/image.hpp"
#include "msglance/loss.hpp"
#include "msglance/siren.hpp"
#include "msglance/ssim.hpp"

namespace msglance {

enum class LossKind { l2, l2_glance_local, l2_glance_global, l2_msglance, l2_ssim, l2_s3im };

std::string_view to_string(LossKind kind);
std::optional<LossKind> parse_loss_kind(std::string_view name);

struct TrainConfig {
  std::size_t steps = 500;
  LossKind loss = LossKind::l2;
  double aux_coeff = 0.01;
  double grad_clip = 1.0;  ///< global max-norm
  std::uint64_t seed = 0;
  std::size_t log_every = 10;
  AdamConfig adam;

  void validate() const;
};

struct StepLog {
  std::size_t step = 0;
  double total_loss = 0.0;
  double l2_loss = 0.0;
  double aux_loss = 0.0;
  double psnr = 0.0;  ///< on the prediction clamped to [0, 1]
  double ssim = 0.0;
  std::size_t nan_fallbacks = 0;
};

struct FitHooks {
  /// Called for each log row as soon as it is produced.
  std::function<void(const StepLog&)> on_log;
  /// Called with the raw auxiliary loss before the NaN guard sees it.
  std::function<void(std::size_t step, LossResult& aux)> on_aux;
};

struct FitResult {
  Image reconstruction;  ///< clamped to [0, 1]
  std::vector<StepLog> log;
  std::size_t nan_fallbacks = 0;
  SirenNetwork network;
};

/// The Glance configuration a loss kind implies (scope set accordingly).
GlanceConfig glance_for(LossKind kind, GlanceConfig base);

struct Objective {
  double total = 0.0;
  double l2 = 0.0;
  double aux = 0.0;
};

/// L2 + aux_coeff * aux for the current network. When `grads` is given, fills
/// it with parameter gradients. The auxiliary loss is skipped entirely when
/// aux_coeff is zero.
Objective evaluate_objective(const SirenNetwork& net, const Eigen::MatrixXd& inputs, const Image& target,
                             LossKind kind, double aux_coeff, const GlanceConfig& glance,
                             const SsimConfig& ssim, Rng& rng, SirenGradients* grads);

/// Full-batch SIREN fit: forward, L2 + aux_coeff * aux, backward, clip, Adam.
/// Rows are logged at steps 0, log_every, 2 log_every, ... <= steps, where
/// step s is the state after s updates. `siren.out_channels` is taken from
/// the target. Throws NumericalError if the guarded loss is still non-finite.
FitResult fit_image(const Image& target, const TrainConfig& train, SirenConfig siren,
                    const GlanceConfig& glance, const SsimConfig& ssim, const FitHooks& hooks = {});

}  // namespace msglance
