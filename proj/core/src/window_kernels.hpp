#pragma once

// Windowed pair statistics shared by the Glance and SSIM families.

#include <cstddef>
#include <vector>

#include "msglance/image.hpp"

namespace msglance::detail {

/// Strided 2-D window: `rows` segments `pitch` elements apart, each holding
/// `len` samples spaced `step` apart.
struct WindowView {
  const double* base = nullptr;
  std::size_t pitch = 0;
  std::size_t rows = 1;
  std::size_t len = 0;
  std::size_t step = 1;

  std::size_t size() const noexcept { return rows * len; }
};

struct PairMoments {
  double mean0 = 0.0;
  double mean1 = 0.0;
  double var0 = 0.0;
  double var1 = 0.0;
  double cov = 0.0;
  // Means relative to the first sample of each window; the gradient pass uses
  // them to center values without re-reading the window.
  double shifted0 = 0.0;
  double shifted1 = 0.0;
};

/// Population moments; `weights` (rows * len, summing to 1) or nullptr for
/// uniform.
PairMoments pair_moments(const WindowView& a, const WindowView& b, const double* weights);

inline constexpr double kLuminanceC1 = 0.01 * 0.01;
inline constexpr double kContrastC2 = 0.03 * 0.03;

struct GlanceParams {
  double stability = 0.03;
  bool lc_augment = false;
  const double* weights = nullptr;
};

/// Glance index of (a, b). When `grad` is non-null it is laid out like `b`
/// and receives scale * d index / d b.
double glance_window(const WindowView& a, const WindowView& b, const GlanceParams& params,
                     double* grad, double scale);

struct SsimParams {
  double c1 = 0.0;
  double c2 = 0.0;
  const double* weights = nullptr;
};

/// Two-term SSIM of (x, y) (c3 = c2 / 2). Gradient is taken w.r.t. y.
double ssim_window(const WindowView& x, const WindowView& y, const SsimParams& params, double* grad,
                   double scale);

struct WindowGrid {
  std::size_t win_rows = 0;
  std::size_t win_cols = 0;
  std::size_t stride = 1;
};

/// Sum of Glance indices over every window position of two equally shaped
/// fields. Windows span all channels (pixel-major, channel-minor).
double sum_glance_windows(const Image& ref, const Image& pred, const WindowGrid& grid,
                          const GlanceParams& params, Image* grad, double scale);

/// Sum of SSIM over every window position and channel. `map`, when given,
/// receives the per-window values in (row, col, channel) order.
double sum_ssim_windows(const Image& ref, const Image& pred, const WindowGrid& grid,
                        const SsimParams& params, std::vector<double>* map, Image* grad,
                        double scale);

}  // namespace msglance::detail

namespace msglance::detail {

/// rows x cols Gaussian centered at ((rows-1)/2, (cols-1)/2), normalized to
/// sum 1, row-major.
std::vector<double> gaussian_weights(std::size_t rows, std::size_t cols, double sigma);

}  // namespace msglance::detail
