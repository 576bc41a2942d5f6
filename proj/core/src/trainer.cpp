#include "msglance/trainer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "msglance/error.hpp"

namespace msglance {
namespace {

constexpr std::array<std::pair<LossKind, std::string_view>, 6> kLossNames{{
    {LossKind::l2, "l2"},
    {LossKind::l2_glance_local, "l2+glance_local"},
    {LossKind::l2_glance_global, "l2+glance_global"},
    {LossKind::l2_msglance, "l2+msglance"},
    {LossKind::l2_ssim, "l2+ssim"},
    {LossKind::l2_s3im, "l2+s3im"},
}};

// Stream for the loss sampler, kept apart from the initialization stream.
constexpr std::uint64_t kLossStreamTweak = 0x9E3779B97F4A7C15ULL;

LossResult auxiliary_loss(LossKind kind, const Image& target, const Image& pred, const GlanceConfig& glance,
                          const SsimConfig& ssim_cfg, Rng& rng) {
  switch (kind) {
    case LossKind::l2_glance_local:
    case LossKind::l2_glance_global:
    case LossKind::l2_msglance:
      return ms_glance_loss(target, pred, glance_for(kind, glance), rng);
    case LossKind::l2_ssim:
      return ssim_loss_grad(target, pred, ssim_cfg);
    case LossKind::l2_s3im:
      return s3im_loss(target, pred, glance, ssim_cfg, rng);
    case LossKind::l2:
      break;
  }
  return {};
}

struct StepOutcome {
  Objective objective;
  Image prediction;
};

StepOutcome run_objective(const SirenNetwork& net, const Eigen::MatrixXd& inputs, const Image& target,
                          LossKind kind, double aux_coeff, const GlanceConfig& glance, const SsimConfig& ssim_cfg,
                          Rng& rng, SirenGradients* grads, NanGuard* guard,
                          const std::function<void(LossResult&)>& on_aux) {
  ForwardCache cache;
  const Eigen::MatrixXd output = siren_forward(net, inputs, grads != nullptr ? &cache : nullptr);
  StepOutcome out{{}, output_to_image(output, target.height(), target.width())};
  LossResult total = l2_loss(target, out.prediction);
  out.objective.l2 = total.loss;

  if (kind != LossKind::l2 && aux_coeff != 0.0) {
    LossResult aux = auxiliary_loss(kind, target, out.prediction, glance, ssim_cfg, rng);
    if (on_aux) on_aux(aux);
    if (guard != nullptr) {
      aux = guard->apply(std::move(aux), [&] { return l1_loss(target, out.prediction); });
    }
    out.objective.aux = aux.loss;
    auto g = total.grad.data();
    auto a = aux.grad.data();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += aux_coeff * a[i];
  }
  out.objective.total = out.objective.l2 + aux_coeff * out.objective.aux;

  if (grads != nullptr) *grads = siren_backward(net, cache, image_to_output(total.grad));
  return out;
}

}  // namespace

std::string_view to_string(LossKind kind) {
  for (const auto& [k, name] : kLossNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<LossKind> parse_loss_kind(std::string_view name) {
  for (const auto& [k, n] : kLossNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

void TrainConfig::validate() const {
  if (steps == 0) throw InputError("train: steps must be >= 1");
  if (!(aux_coeff >= 0.0)) throw InputError("train: aux_coeff must be >= 0");
  if (!(grad_clip > 0.0)) throw InputError("train: grad_clip must be > 0");
  if (log_every == 0) throw InputError("train: log_every must be >= 1");
  if (!(adam.lr > 0.0)) throw InputError("train: learning rate must be > 0");
}

GlanceConfig glance_for(LossKind kind, GlanceConfig base) {
  switch (kind) {
    case LossKind::l2_glance_local:
      base.scope = GlanceScope::local;
      break;
    case LossKind::l2_glance_global:
      base.scope = GlanceScope::global;
      break;
    case LossKind::l2_msglance:
      base.scope = GlanceScope::multi_scale;
      break;
    default:
      break;
  }
  return base;
}

Objective evaluate_objective(const SirenNetwork& net, const Eigen::MatrixXd& inputs, const Image& target,
                             LossKind kind, double aux_coeff, const GlanceConfig& glance,
                             const SsimConfig& ssim_cfg, Rng& rng, SirenGradients* grads) {
  return run_objective(net, inputs, target, kind, aux_coeff, glance, ssim_cfg, rng, grads, nullptr, {}).objective;
}

FitResult fit_image(const Image& target, const TrainConfig& train, SirenConfig siren, const GlanceConfig& glance,
                    const SsimConfig& ssim_cfg, const FitHooks& hooks) {
  train.validate();
  if (target.empty()) throw InputError("fit_image: empty target");
  siren.out_channels = target.channels();

  Rng init_rng(train.seed);
  Rng loss_rng(train.seed ^ kLossStreamTweak);
  FitResult result;
  result.network = siren_init(siren, init_rng);
  const Eigen::MatrixXd inputs = siren_inputs(target.height(), target.width(), siren);

  // Logged SSIM shrinks its window for images smaller than it.
  SsimConfig log_ssim = ssim_cfg;
  log_ssim.window = std::min({log_ssim.window, target.height(), target.width()});

  AdamState adam(train.adam);
  NanGuard guard;
  for (std::size_t step = 0;; ++step) {
    const bool last = step == train.steps;
    SirenGradients grads;
    auto on_aux = [&](LossResult& aux) {
      if (hooks.on_aux) hooks.on_aux(step, aux);
    };
    StepOutcome outcome = run_objective(result.network, inputs, target, train.loss, train.aux_coeff, glance,
                                        ssim_cfg, loss_rng, last ? nullptr : &grads, &guard, on_aux);
    if (!std::isfinite(outcome.objective.total)) {
      throw NumericalError("fit_image: non-finite loss at step " + std::to_string(step) +
                           " (nan fallbacks so far: " + std::to_string(guard.fallbacks()) + ")");
    }

    if (step % train.log_every == 0) {
      const Image shown = clamp_unit(outcome.prediction);
      StepLog row;
      row.step = step;
      row.total_loss = outcome.objective.total;
      row.l2_loss = outcome.objective.l2;
      row.aux_loss = outcome.objective.aux;
      row.psnr = psnr(target, shown);
      row.ssim = ssim(target, shown, log_ssim).mean;
      row.nan_fallbacks = guard.fallbacks();
      result.log.push_back(row);
      if (hooks.on_log) hooks.on_log(row);
    }

    if (last) {
      result.reconstruction = clamp_unit(outcome.prediction);
      break;
    }
    const auto grad_blocks = grads.blocks();
    clip_global_norm(grad_blocks, train.grad_clip);
    const auto params = result.network.parameter_blocks();
    adam_step(adam, params, std::as_const(grads).blocks());
  }
  result.nan_fallbacks = guard.fallbacks();
  return result;
}

}  // namespace msglance
