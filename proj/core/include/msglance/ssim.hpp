#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "msglance/glance.hpp"
#include "msglance/image.hpp"
#include "msglance/loss.hpp"
#include "msglance/random.hpp"

namespace msglance {

struct SsimConfig {
  std::size_t window = 16;
  std::size_t stride = 1;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double peak = 1.0;
  Kernel kernel = Kernel::gaussian;

  double c1() const noexcept { return (k1 * peak) * (k1 * peak); }
  double c2() const noexcept { return (k2 * peak) * (k2 * peak); }
  double c3() const noexcept { return c2() / 2.0; }

  void validate() const;
};

/// size x size Gaussian sampled at integer offsets from the window center,
/// normalized to sum 1. Row-major.
std::vector<double> gaussian_window(std::size_t size, double sigma);

struct SsimTerms {
  double luminance = 0.0;
  double contrast = 0.0;
  double structure = 0.0;
};

/// Weighted l, c, s of two windows. Empty weights mean uniform.
SsimTerms ssim_terms(std::span<const double> x, std::span<const double> y,
                     std::span<const double> weights, double c1, double c2, double c3);

struct SsimResult {
  double mean = 0.0;
  /// Per-window values ordered by (window row, window col, channel).
  std::vector<double> map;
};

/// Mean SSIM over all valid windows, channels treated independently.
SsimResult ssim(const Image& a, const Image& b, const SsimConfig& cfg);

/// 1 - SSIM(ref, pred) and its gradient with respect to `pred`.
LossResult ssim_loss_grad(const Image& ref, const Image& pred, const SsimConfig& cfg);

/// Stochastic shuffled-pixel SSIM loss: SSIM on `shuffles` random n x m
/// reorderings of one pixel selection (no air prior), averaged.
LossResult s3im_loss(const Image& ref, const Image& pred, const GlanceConfig& glance,
                     const SsimConfig& cfg, Rng& rng);
LossResult s3im_loss(const Image& ref, const Image& pred, std::span<const SampleGrid> orderings,
                     const SsimConfig& cfg);

}  // namespace msglance
