#include "window_kernels.hpp"

#include <algorithm>
#include <cmath>

namespace msglance::detail {
namespace {

template <bool Weighted, bool Unit>
PairMoments moments_impl(const WindowView& a, const WindowView& b, const double* w) {
  const double k0 = a.base[0];
  const double k1 = b.base[0];
  double s0 = 0.0, s1 = 0.0, s00 = 0.0, s11 = 0.0, s01 = 0.0;
  for (std::size_t r = 0; r < a.rows; ++r) {
    const double* pa = a.base + r * a.pitch;
    const double* pb = b.base + r * b.pitch;
    const double* pw = Weighted ? w + r * a.len : nullptr;
    for (std::size_t i = 0; i < a.len; ++i) {
      const std::size_t at = Unit ? i : i * a.step;
      const double d0 = pa[at] - k0;
      const double d1 = pb[at] - k1;
      if constexpr (Weighted) {
        const double wd0 = pw[i] * d0;
        const double wd1 = pw[i] * d1;
        s0 += wd0;
        s1 += wd1;
        s00 += wd0 * d0;
        s11 += wd1 * d1;
        s01 += wd0 * d1;
      } else {
        s0 += d0;
        s1 += d1;
        s00 += d0 * d0;
        s11 += d1 * d1;
        s01 += d0 * d1;
      }
    }
  }
  if constexpr (!Weighted) {
    const double inv_n = 1.0 / static_cast<double>(a.size());
    s0 *= inv_n;
    s1 *= inv_n;
    s00 *= inv_n;
    s11 *= inv_n;
    s01 *= inv_n;
  }
  PairMoments m;
  m.shifted0 = s0;
  m.shifted1 = s1;
  m.mean0 = k0 + s0;
  m.mean1 = k1 + s1;
  m.var0 = std::max(s00 - s0 * s0, 0.0);
  m.var1 = std::max(s11 - s1 * s1, 0.0);
  m.cov = s01 - s0 * s1;
  return m;
}

// grad[i] += scale * w_i * (alpha (a_i - mean0) + beta (b_i - mean1) + gamma)
template <bool Weighted, bool Unit>
void scatter_impl(const WindowView& a, const WindowView& b, const double* w, const PairMoments& m,
                  double alpha, double beta, double gamma, double* grad, double scale) {
  const double k0 = a.base[0] + m.shifted0;
  const double k1 = b.base[0] + m.shifted1;
  const double uniform = Weighted ? 0.0 : scale / static_cast<double>(a.size());
  for (std::size_t r = 0; r < a.rows; ++r) {
    const double* pa = a.base + r * a.pitch;
    const double* pb = b.base + r * b.pitch;
    double* pg = grad + r * b.pitch;
    const double* pw = Weighted ? w + r * a.len : nullptr;
    for (std::size_t i = 0; i < a.len; ++i) {
      const std::size_t at = Unit ? i : i * a.step;
      const double g = alpha * (pa[at] - k0) + beta * (pb[at] - k1) + gamma;
      if constexpr (Weighted) {
        pg[at] += scale * pw[i] * g;
      } else {
        pg[at] += uniform * g;
      }
    }
  }
}

void scatter(const WindowView& a, const WindowView& b, const double* w, const PairMoments& m,
             double alpha, double beta, double gamma, double* grad, double scale) {
  const bool unit = a.step == 1;
  if (w != nullptr) {
    unit ? scatter_impl<true, true>(a, b, w, m, alpha, beta, gamma, grad, scale)
         : scatter_impl<true, false>(a, b, w, m, alpha, beta, gamma, grad, scale);
  } else {
    unit ? scatter_impl<false, true>(a, b, w, m, alpha, beta, gamma, grad, scale)
         : scatter_impl<false, false>(a, b, w, m, alpha, beta, gamma, grad, scale);
  }
}

}  // namespace

PairMoments pair_moments(const WindowView& a, const WindowView& b, const double* weights) {
  const bool unit = a.step == 1;
  if (weights != nullptr) {
    return unit ? moments_impl<true, true>(a, b, weights) : moments_impl<true, false>(a, b, weights);
  }
  return unit ? moments_impl<false, true>(a, b, weights) : moments_impl<false, false>(a, b, weights);
}

double glance_window(const WindowView& a, const WindowView& b, const GlanceParams& params,
                     double* grad, double scale) {
  const PairMoments m = pair_moments(a, b, params.weights);
  const double sd0 = std::sqrt(m.var0);
  const double sd1 = std::sqrt(m.var1);
  const double num = m.cov + params.stability;
  const double den = sd0 * sd1 + params.stability;
  // |cov| <= sd0 sd1, so only rounding can push this past +-1.
  const double index = std::clamp(num / den, -1.0, 1.0);

  double lum = 1.0, con = 1.0;
  double lum_num = 0.0, lum_den = 1.0, con_num = 0.0, con_den = 1.0;
  if (params.lc_augment) {
    lum_num = 2.0 * m.mean0 * m.mean1 + kLuminanceC1;
    lum_den = m.mean0 * m.mean0 + m.mean1 * m.mean1 + kLuminanceC1;
    con_num = 2.0 * sd0 * sd1 + kContrastC2;
    con_den = m.var0 + m.var1 + kContrastC2;
    lum = lum_num / lum_den;
    con = con_num / con_den;
  }
  const double value = lum * con * index;
  if (grad == nullptr) return value;

  // d value / d b_i = w_i (alpha (a_i - mu0) + beta (b_i - mu1) + gamma)
  const double alpha = lum * con / den;
  double d_sd1 = -lum * con * num * sd0 / (den * den);
  double gamma = 0.0;
  if (params.lc_augment) {
    const double dlum_dmu1 = (2.0 * m.mean0 * lum_den - lum_num * 2.0 * m.mean1) / (lum_den * lum_den);
    const double dcon_dsd1 = (2.0 * sd0 * con_den - con_num * 2.0 * sd1) / (con_den * con_den);
    d_sd1 += lum * index * dcon_dsd1;
    gamma = con * index * dlum_dmu1;
  }
  // d sd1 / d b_i = w_i (b_i - mu1) / sd1; a constant window takes the zero
  // subgradient.
  const double beta = sd1 > 0.0 ? d_sd1 / sd1 : 0.0;
  scatter(a, b, params.weights, m, alpha, beta, gamma, grad, scale);
  return value;
}

double ssim_window(const WindowView& x, const WindowView& y, const SsimParams& params, double* grad,
                   double scale) {
  const PairMoments m = pair_moments(x, y, params.weights);
  const double a1 = 2.0 * m.mean0 * m.mean1 + params.c1;
  const double a2 = 2.0 * m.cov + params.c2;
  const double b1 = m.mean0 * m.mean0 + m.mean1 * m.mean1 + params.c1;
  const double b2 = m.var0 + m.var1 + params.c2;
  const double value = (a1 * a2) / (b1 * b2);
  if (grad == nullptr) return value;

  const double d_mu1 = 2.0 * m.mean0 * a2 / (b1 * b2) - value * 2.0 * m.mean1 / b1;
  const double d_cov = 2.0 * a1 / (b1 * b2);
  const double d_var1 = -value / b2;
  scatter(x, y, params.weights, m, d_cov, 2.0 * d_var1, d_mu1, grad, scale);
  return value;
}

double sum_glance_windows(const Image& ref, const Image& pred, const WindowGrid& grid,
                          const GlanceParams& params, Image* grad, double scale) {
  const std::size_t ch = ref.channels();
  const std::size_t pitch = ref.width() * ch;
  const std::size_t rows = (ref.height() - grid.win_rows) / grid.stride + 1;
  const std::size_t cols = (ref.width() - grid.win_cols) / grid.stride + 1;
  const double* r0 = ref.data().data();
  const double* p0 = pred.data().data();
  double* g0 = grad != nullptr ? grad->data().data() : nullptr;
  double sum = 0.0;
  for (std::size_t wr = 0; wr < rows; ++wr) {
    for (std::size_t wc = 0; wc < cols; ++wc) {
      const std::size_t offset = wr * grid.stride * pitch + wc * grid.stride * ch;
      const WindowView a{r0 + offset, pitch, grid.win_rows, grid.win_cols * ch, 1};
      const WindowView b{p0 + offset, pitch, grid.win_rows, grid.win_cols * ch, 1};
      sum += glance_window(a, b, params, g0 != nullptr ? g0 + offset : nullptr, scale);
    }
  }
  return sum;
}

double sum_ssim_windows(const Image& ref, const Image& pred, const WindowGrid& grid,
                        const SsimParams& params, std::vector<double>* map, Image* grad,
                        double scale) {
  const std::size_t ch = ref.channels();
  const std::size_t pitch = ref.width() * ch;
  const std::size_t rows = (ref.height() - grid.win_rows) / grid.stride + 1;
  const std::size_t cols = (ref.width() - grid.win_cols) / grid.stride + 1;
  const double* r0 = ref.data().data();
  const double* p0 = pred.data().data();
  double* g0 = grad != nullptr ? grad->data().data() : nullptr;
  if (map != nullptr) map->reserve(map->size() + rows * cols * ch);
  double sum = 0.0;
  for (std::size_t wr = 0; wr < rows; ++wr) {
    for (std::size_t wc = 0; wc < cols; ++wc) {
      for (std::size_t c = 0; c < ch; ++c) {
        const std::size_t offset = wr * grid.stride * pitch + wc * grid.stride * ch + c;
        const WindowView x{r0 + offset, pitch, grid.win_rows, grid.win_cols, ch};
        const WindowView y{p0 + offset, pitch, grid.win_rows, grid.win_cols, ch};
        const double v = ssim_window(x, y, params, g0 != nullptr ? g0 + offset : nullptr, scale);
        if (map != nullptr) map->push_back(v);
        sum += v;
      }
    }
  }
  return sum;
}

}  // namespace msglance::detail

namespace msglance::detail {

std::vector<double> gaussian_weights(std::size_t rows, std::size_t cols, double sigma) {
  auto axis = [sigma](std::size_t n) {
    std::vector<double> g(n);
    const double center = (static_cast<double>(n) - 1.0) / 2.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = static_cast<double>(i) - center;
      g[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    }
    return g;
  };
  const auto gr = axis(rows);
  const auto gc = axis(cols);
  std::vector<double> w(rows * cols);
  double total = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      w[r * cols + c] = gr[r] * gc[c];
      total += w[r * cols + c];
    }
  }
  for (double& v : w) v /= total;
  return w;
}

}  // namespace msglance::detail
