#pragma once

// Naive reference implementations used by the tests: explicit vectors,
// two-pass statistics, no code shared with the library. Templated so the
// finite-difference checks can run in long double.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <msglance/glance.hpp>
#include <msglance/image.hpp>
#include <msglance/siren.hpp>
#include <msglance/ssim.hpp>

namespace oracle {

template <typename T>
struct Img {
  std::size_t h = 0, w = 0, ch = 0;
  std::vector<T> v;

  T at(std::size_t r, std::size_t c, std::size_t k) const { return v[(r * w + c) * ch + k]; }
};

template <typename T>
Img<T> from(const msglance::Image& img) {
  Img<T> out{img.height(), img.width(), img.channels(), {}};
  for (double x : img.data()) out.v.push_back(static_cast<T>(x));
  return out;
}

template <typename T>
struct Stats {
  T mu0, mu1, var0, var1, cov;
};

// Weights, if given, must sum to one.
template <typename T>
Stats<T> stats(const std::vector<T>& a, const std::vector<T>& b, const std::vector<T>* w = nullptr) {
  const std::size_t n = a.size();
  auto weight = [&](std::size_t i) { return w ? (*w)[i] : T(1) / static_cast<T>(n); };
  Stats<T> s{};
  for (std::size_t i = 0; i < n; ++i) {
    s.mu0 += weight(i) * a[i];
    s.mu1 += weight(i) * b[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    s.var0 += weight(i) * (a[i] - s.mu0) * (a[i] - s.mu0);
    s.var1 += weight(i) * (b[i] - s.mu1) * (b[i] - s.mu1);
    s.cov += weight(i) * (a[i] - s.mu0) * (b[i] - s.mu1);
  }
  return s;
}

template <typename T>
T pearson(const std::vector<T>& a, const std::vector<T>& b) {
  T ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<T>(a.size());
  mb /= static_cast<T>(b.size());
  T sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

template <typename T>
T glance_index(const std::vector<T>& a, const std::vector<T>& b, T cs, const std::vector<T>* w = nullptr,
               bool lc = false) {
  const auto s = stats(a, b, w);
  const T sd0 = std::sqrt(s.var0), sd1 = std::sqrt(s.var1);
  T value = (s.cov + cs) / (sd0 * sd1 + cs);
  if (lc) {
    const T c1 = T(1) / 10000, c2 = T(9) / 10000;
    value *= (2 * s.mu0 * s.mu1 + c1) / (s.mu0 * s.mu0 + s.mu1 * s.mu1 + c1);
    value *= (2 * sd0 * sd1 + c2) / (s.var0 + s.var1 + c2);
  }
  return value;
}

template <typename T>
std::vector<T> gaussian(std::size_t rows, std::size_t cols, double sigma) {
  std::vector<T> w;
  T total = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const T dr = static_cast<T>(r) - static_cast<T>(rows - 1) / 2;
      const T dc = static_cast<T>(c) - static_cast<T>(cols - 1) / 2;
      w.push_back(std::exp(-(dr * dr + dc * dc) / (2 * static_cast<T>(sigma) * static_cast<T>(sigma))));
      total += w.back();
    }
  }
  for (T& x : w) x /= total;
  return w;
}

using IndexList = std::vector<std::size_t>;

// Flat value indices of every (rows x cols) window of a field_h x field_w
// field, pixels row-major. `pixel(r, c)` maps a field cell to an image pixel.
// channel < 0 takes all channels (innermost), otherwise just that one.
template <typename Pixel>
std::vector<IndexList> window_lists(std::size_t field_h, std::size_t field_w, std::size_t ch, std::size_t rows,
                                    std::size_t cols, std::size_t stride, Pixel pixel, int channel = -1) {
  std::vector<IndexList> out;
  for (std::size_t top = 0; top + rows <= field_h; top += stride) {
    for (std::size_t left = 0; left + cols <= field_w; left += stride) {
      IndexList list;
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
          const std::size_t p = pixel(top + r, left + c);
          if (channel < 0) {
            for (std::size_t k = 0; k < ch; ++k) list.push_back(p * ch + k);
          } else {
            list.push_back(p * ch + static_cast<std::size_t>(channel));
          }
        }
      }
      out.push_back(std::move(list));
    }
  }
  return out;
}

template <typename T>
std::vector<T> pick(const std::vector<T>& v, const IndexList& idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(v[i]);
  return out;
}

// Windows of a whole image as explicit vectors.
template <typename T>
std::vector<std::vector<T>> windows(const Img<T>& f, std::size_t rows, std::size_t cols, std::size_t stride) {
  std::vector<std::vector<T>> out;
  for (const auto& idx : window_lists(f.h, f.w, f.ch, rows, cols, stride,
                                      [&](std::size_t r, std::size_t c) { return r * f.w + c; })) {
    out.push_back(pick(f.v, idx));
  }
  return out;
}

// GlanceIM for a fixed image shape and fixed global orderings.
template <typename T>
class GlanceOracle {
 public:
  GlanceOracle(std::size_t h, std::size_t w, std::size_t ch, const msglance::GlanceConfig& cfg,
               std::span<const msglance::SampleGrid> orderings)
      : cfg_(cfg) {
    if (cfg.kernel == msglance::Kernel::gaussian) {
      for (T s : gaussian<T>(cfg.window_rows, cfg.window_cols, cfg.kernel_sigma)) {
        for (std::size_t k = 0; k < ch; ++k) weights_.push_back(s / static_cast<T>(ch));
      }
    }
    if (cfg.scope != msglance::GlanceScope::global) {
      local_ = window_lists(h, w, ch, cfg.window_rows, cfg.window_cols, cfg.stride,
                            [&](std::size_t r, std::size_t c) { return r * w + c; });
    }
    if (cfg.scope != msglance::GlanceScope::local) {
      for (const auto& g : orderings) {
        auto lists = window_lists(g.rows, g.cols, ch, cfg.window_rows, cfg.window_cols, cfg.stride,
                                  [&](std::size_t r, std::size_t c) {
                                    const auto& p = g.coords[r * g.cols + c];
                                    return p.row * w + p.col;
                                  });
        global_.insert(global_.end(), lists.begin(), lists.end());
      }
    }
  }

  T operator()(const std::vector<T>& ref, const std::vector<T>& pred) const {
    const std::vector<T>* wp = weights_.empty() ? nullptr : &weights_;
    const T cs = static_cast<T>(cfg_.stability);
    T local = 0, global = 0;
    for (const auto& idx : local_) local += glance_index(pick(ref, idx), pick(pred, idx), cs, wp, cfg_.lc_augment);
    for (const auto& idx : global_) global += glance_index(pick(ref, idx), pick(pred, idx), cs, wp, cfg_.lc_augment);
    if (cfg_.aggregation == msglance::Aggregation::separate_mean && !local_.empty() && !global_.empty()) {
      return local / static_cast<T>(2 * local_.size()) + global / static_cast<T>(2 * global_.size());
    }
    return (local + global) / static_cast<T>(local_.size() + global_.size());
  }

 private:
  msglance::GlanceConfig cfg_;
  std::vector<T> weights_;
  std::vector<IndexList> local_, global_;
};

template <typename T>
T glance_measure(const Img<T>& ref, const Img<T>& pred, const msglance::GlanceConfig& cfg,
                 std::span<const msglance::SampleGrid> orderings) {
  return GlanceOracle<T>(ref.h, ref.w, ref.ch, cfg, orderings)(ref.v, pred.v);
}

// Mean SSIM over per-channel windows of a field; `pixel` maps cells to pixels.
template <typename T>
class SsimOracle {
 public:
  template <typename Pixel>
  SsimOracle(std::size_t field_h, std::size_t field_w, std::size_t ch, const msglance::SsimConfig& cfg, Pixel pixel)
      : c1_(static_cast<T>(cfg.k1 * cfg.peak) * static_cast<T>(cfg.k1 * cfg.peak)),
        c2_(static_cast<T>(cfg.k2 * cfg.peak) * static_cast<T>(cfg.k2 * cfg.peak)) {
    if (cfg.kernel == msglance::Kernel::gaussian) weights_ = gaussian<T>(cfg.window, cfg.window, cfg.sigma);
    for (std::size_t k = 0; k < ch; ++k) {
      auto lists = window_lists(field_h, field_w, ch, cfg.window, cfg.window, cfg.stride, pixel, static_cast<int>(k));
      lists_.insert(lists_.end(), lists.begin(), lists.end());
    }
  }

  T operator()(const std::vector<T>& x, const std::vector<T>& y) const {
    const std::vector<T>* wp = weights_.empty() ? nullptr : &weights_;
    T sum = 0;
    for (const auto& idx : lists_) {
      const auto s = stats(pick(x, idx), pick(y, idx), wp);
      sum += (2 * s.mu0 * s.mu1 + c1_) * (2 * s.cov + c2_) /
             ((s.mu0 * s.mu0 + s.mu1 * s.mu1 + c1_) * (s.var0 + s.var1 + c2_));
    }
    return sum / static_cast<T>(lists_.size());
  }

 private:
  T c1_, c2_;
  std::vector<T> weights_;
  std::vector<IndexList> lists_;
};

template <typename T>
T ssim_mean(const Img<T>& x, const Img<T>& y, const msglance::SsimConfig& cfg) {
  return SsimOracle<T>(x.h, x.w, x.ch, cfg, [&](std::size_t r, std::size_t c) { return r * x.w + c; })(x.v, y.v);
}

// SSIM averaged over the sample-grid orderings.
template <typename T>
class S3imOracle {
 public:
  S3imOracle(std::size_t w, std::size_t ch, std::span<const msglance::SampleGrid> orderings,
             const msglance::SsimConfig& cfg) {
    for (const auto& g : orderings) {
      parts_.emplace_back(g.rows, g.cols, ch, cfg, [&g, w](std::size_t r, std::size_t c) {
        const auto& p = g.coords[r * g.cols + c];
        return p.row * w + p.col;
      });
    }
  }

  T operator()(const std::vector<T>& ref, const std::vector<T>& pred) const {
    T sum = 0;
    for (const auto& part : parts_) sum += part(ref, pred);
    return sum / static_cast<T>(parts_.size());
  }

 private:
  std::vector<SsimOracle<T>> parts_;
};

// Scalar SIREN: one pixel at a time, plain loops.
template <typename T>
struct Layer {
  std::size_t out = 0, in = 0;
  std::vector<T> weight;  // row-major out x in
  std::vector<T> bias;
  T omega = 1;
  bool sine = false;
};

template <typename T>
std::vector<Layer<T>> layers_of(const msglance::SirenNetwork& net) {
  std::vector<Layer<T>> out;
  for (const auto& l : net.layers) {
    Layer<T> o;
    o.out = static_cast<std::size_t>(l.weight.rows());
    o.in = static_cast<std::size_t>(l.weight.cols());
    for (std::size_t r = 0; r < o.out; ++r) {
      for (std::size_t c = 0; c < o.in; ++c) o.weight.push_back(static_cast<T>(l.weight(r, c)));
      o.bias.push_back(static_cast<T>(l.bias(r)));
    }
    o.omega = static_cast<T>(l.omega);
    o.sine = l.sine;
    out.push_back(std::move(o));
  }
  return out;
}

// Raw (row, col) coordinates in [-1, 1]; output is h x w x channels.
template <typename T>
Img<T> siren_image(const std::vector<Layer<T>>& layers, std::size_t h, std::size_t w) {
  Img<T> out{h, w, layers.back().out, {}};
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      std::vector<T> x{h == 1 ? T(0) : -1 + 2 * static_cast<T>(r) / static_cast<T>(h - 1),
                       w == 1 ? T(0) : -1 + 2 * static_cast<T>(c) / static_cast<T>(w - 1)};
      for (const auto& l : layers) {
        std::vector<T> z(l.out);
        for (std::size_t o = 0; o < l.out; ++o) {
          T acc = l.bias[o];
          for (std::size_t i = 0; i < l.in; ++i) acc += l.weight[o * l.in + i] * x[i];
          z[o] = l.sine ? std::sin(l.omega * acc) : acc;
        }
        x = std::move(z);
      }
      for (T v : x) out.v.push_back(v);
    }
  }
  return out;
}

template <typename T>
T mse(const Img<T>& a, const Img<T>& b) {
  T sum = 0;
  for (std::size_t i = 0; i < a.v.size(); ++i) sum += (a.v[i] - b.v[i]) * (a.v[i] - b.v[i]);
  return sum / static_cast<T>(a.v.size());
}

// Central differences of f over every entry of x.
template <typename F>
std::vector<double> central_diff(std::vector<long double> x, F f, long double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double keep = x[i];
    x[i] = keep + h;
    const long double up = f(x);
    x[i] = keep - h;
    const long double down = f(x);
    x[i] = keep;
    g[i] = static_cast<double>((up - down) / (2 * h));
  }
  return g;
}

// Largest |a - b| / max(|a|, |b|) over entries where either exceeds floor.
inline double max_rel_error(std::span<const double> a, std::span<const double> b, double floor) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max(std::abs(a[i]), std::abs(b[i]));
    if (scale > floor) worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

}  // namespace oracle
