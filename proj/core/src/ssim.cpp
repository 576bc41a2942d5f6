#include "msglance/ssim.hpp"

#include <cmath>

#include "msglance/error.hpp"
#include "window_kernels.hpp"

namespace msglance {
namespace {

std::vector<double> weights_for(const SsimConfig& cfg) {
  if (cfg.kernel == Kernel::uniform) return {};
  return gaussian_window(cfg.window, cfg.sigma);
}

void require_fits(const Image& img, const SsimConfig& cfg) {
  if (img.height() < cfg.window || img.width() < cfg.window) {
    throw InputError("ssim: image smaller than the " + std::to_string(cfg.window) + "-pixel window");
  }
}

double ssim_impl(const Image& ref, const Image& pred, const SsimConfig& cfg, std::vector<double>* map,
                 Image* grad) {
  cfg.validate();
  require_same_shape(ref, pred, "ssim");
  require_fits(ref, cfg);
  const auto weights = weights_for(cfg);
  const detail::SsimParams params{cfg.c1(), cfg.c2(), weights.empty() ? nullptr : weights.data()};
  const detail::WindowGrid grid{cfg.window, cfg.window, cfg.stride};
  const std::size_t count = window_count(ref.height(), cfg.window, cfg.stride) *
                            window_count(ref.width(), cfg.window, cfg.stride) * ref.channels();
  const double inv = 1.0 / static_cast<double>(count);
  return inv * detail::sum_ssim_windows(ref, pred, grid, params, map, grad, -inv);
}

}  // namespace

void SsimConfig::validate() const {
  if (window < 2) throw InputError("ssim: window must be >= 2");
  if (stride == 0) throw InputError("ssim: stride must be >= 1");
  if (!(sigma > 0.0)) throw InputError("ssim: sigma must be > 0");
  if (k1 < 0.0 || k2 < 0.0 || !(peak > 0.0)) throw InputError("ssim: invalid stability coefficients");
}

std::vector<double> gaussian_window(std::size_t size, double sigma) {
  if (size < 2) throw InputError("gaussian_window: size must be >= 2");
  if (!(sigma > 0.0)) throw InputError("gaussian_window: sigma must be > 0");
  return detail::gaussian_weights(size, size, sigma);
}

SsimTerms ssim_terms(std::span<const double> x, std::span<const double> y, std::span<const double> weights,
                     double c1, double c2, double c3) {
  if (x.size() != y.size() || x.empty()) throw InputError("ssim_terms: length mismatch");
  if (!weights.empty() && weights.size() != x.size()) throw InputError("ssim_terms: weight length mismatch");
  const detail::WindowView a{x.data(), x.size(), 1, x.size(), 1};
  const detail::WindowView b{y.data(), y.size(), 1, y.size(), 1};
  const auto m = detail::pair_moments(a, b, weights.empty() ? nullptr : weights.data());
  const double sx = std::sqrt(m.var0);
  const double sy = std::sqrt(m.var1);
  SsimTerms t;
  t.luminance = (2.0 * m.mean0 * m.mean1 + c1) / (m.mean0 * m.mean0 + m.mean1 * m.mean1 + c1);
  t.contrast = (2.0 * sx * sy + c2) / (m.var0 + m.var1 + c2);
  t.structure = (m.cov + c3) / (sx * sy + c3);
  return t;
}

SsimResult ssim(const Image& a, const Image& b, const SsimConfig& cfg) {
  SsimResult out;
  out.mean = ssim_impl(a, b, cfg, &out.map, nullptr);
  return out;
}

LossResult ssim_loss_grad(const Image& ref, const Image& pred, const SsimConfig& cfg) {
  LossResult out{0.0, Image(pred.height(), pred.width(), pred.channels())};
  out.loss = 1.0 - ssim_impl(ref, pred, cfg, nullptr, &out.grad);
  return out;
}

LossResult s3im_loss(const Image& ref, const Image& pred, const GlanceConfig& glance, const SsimConfig& cfg,
                     Rng& rng) {
  require_same_shape(ref, pred, "s3im_loss");
  GlanceConfig sampling = glance;
  sampling.air_threshold.reset();
  const auto orderings = draw_global_sampling(ref, sampling, rng);
  return s3im_loss(ref, pred, orderings, cfg);
}

LossResult s3im_loss(const Image& ref, const Image& pred, std::span<const SampleGrid> orderings,
                     const SsimConfig& cfg) {
  require_same_shape(ref, pred, "s3im_loss");
  if (orderings.empty()) throw InputError("s3im_loss: no sample grids");
  LossResult out{0.0, Image(pred.height(), pred.width(), pred.channels())};
  const double inv = 1.0 / static_cast<double>(orderings.size());
  const std::size_t ch = pred.channels();
  for (const SampleGrid& g : orderings) {
    const Image ref_field = gather_grid(ref, g);
    const Image pred_field = gather_grid(pred, g);
    LossResult part = ssim_loss_grad(ref_field, pred_field, cfg);
    out.loss += inv * part.loss;
    for (std::size_t cell = 0; cell < g.coords.size(); ++cell) {
      const PixelCoord& at = g.coords[cell];
      for (std::size_t k = 0; k < ch; ++k) out.grad.at(at.row, at.col, k) += inv * part.grad.data()[cell * ch + k];
    }
  }
  return out;
}

}  // namespace msglance
