#include "msglance/glance.hpp"

#include <cstdint>
#include <string>

#include "msglance/error.hpp"
#include "window_kernels.hpp"

namespace msglance {
namespace {

bool uses_local(const GlanceConfig& cfg) { return cfg.scope != GlanceScope::global; }
bool uses_global(const GlanceConfig& cfg) { return cfg.scope != GlanceScope::local; }

detail::GlanceParams params_for(const GlanceConfig& cfg, const std::vector<double>& weights) {
  return {cfg.stability, cfg.lc_augment, weights.empty() ? nullptr : weights.data()};
}

void require_window_fits(std::size_t rows, std::size_t cols, const GlanceConfig& cfg, const char* what) {
  if (rows < cfg.window_rows || cols < cfg.window_cols) {
    throw InputError(std::string(what) + ": " + std::to_string(rows) + "x" + std::to_string(cols) +
                     " is smaller than the " + std::to_string(cfg.window_rows) + "x" +
                     std::to_string(cfg.window_cols) + " window");
  }
}

// Windows of `field`, each element tagged by `origin(cell_row, cell_col)`.
template <typename Origin>
GlanceVectorSet extract_windows(const Image& field, const GlanceConfig& cfg, Origin origin) {
  const std::size_t ch = field.channels();
  const std::size_t rows = window_count(field.height(), cfg.window_rows, cfg.stride);
  const std::size_t cols = window_count(field.width(), cfg.window_cols, cfg.stride);
  GlanceVectorSet set;
  set.length = cfg.window_rows * cfg.window_cols * ch;
  set.values.reserve(rows * cols * set.length);
  set.provenance.reserve(rows * cols * set.length);
  for (std::size_t wr = 0; wr < rows; ++wr) {
    for (std::size_t wc = 0; wc < cols; ++wc) {
      for (std::size_t r = 0; r < cfg.window_rows; ++r) {
        for (std::size_t c = 0; c < cfg.window_cols; ++c) {
          const std::size_t fr = wr * cfg.stride + r;
          const std::size_t fc = wc * cfg.stride + c;
          const PixelCoord at = origin(fr, fc);
          for (std::size_t k = 0; k < ch; ++k) {
            set.values.push_back(field.at(fr, fc, k));
            set.provenance.push_back(at);
          }
        }
      }
    }
  }
  return set;
}

struct Counts {
  std::size_t local = 0;
  std::size_t global = 0;
};

Counts pair_counts(const Image& ref, const GlanceConfig& cfg, std::span<const SampleGrid> orderings) {
  Counts n;
  if (uses_local(cfg)) {
    require_window_fits(ref.height(), ref.width(), cfg, "local glance");
    n.local = window_count(ref.height(), cfg.window_rows, cfg.stride) *
              window_count(ref.width(), cfg.window_cols, cfg.stride);
  }
  if (uses_global(cfg)) {
    if (orderings.empty()) throw InputError("global glance: no sample grids");
    for (const SampleGrid& g : orderings) {
      require_window_fits(g.rows, g.cols, cfg, "global glance");
      if (g.coords.size() != g.rows * g.cols) throw InputError("global glance: grid size mismatch");
      n.global += window_count(g.rows, cfg.window_rows, cfg.stride) *
                  window_count(g.cols, cfg.window_cols, cfg.stride);
    }
  }
  return n;
}

// Returns GlanceIM. When `grad` is given it receives d(1 - GlanceIM)/d pred.
double evaluate(const Image& ref, const Image& pred, const GlanceConfig& cfg,
                std::span<const SampleGrid> orderings, Image* grad) {
  cfg.validate();
  require_same_shape(ref, pred, "glance");
  const Counts n = pair_counts(ref, cfg, orderings);
  const auto weights = window_weights(cfg, ref.channels());
  const auto params = params_for(cfg, weights);
  const detail::WindowGrid windows{cfg.window_rows, cfg.window_cols, cfg.stride};

  double local_scale = 0.0;
  double global_scale = 0.0;
  if (cfg.aggregation == Aggregation::separate_mean && n.local > 0 && n.global > 0) {
    local_scale = 0.5 / static_cast<double>(n.local);
    global_scale = 0.5 / static_cast<double>(n.global);
  } else {
    local_scale = global_scale = 1.0 / static_cast<double>(n.local + n.global);
  }

  double measure = 0.0;
  if (n.local > 0) {
    measure += local_scale * detail::sum_glance_windows(ref, pred, windows, params, grad, -local_scale);
  }
  if (n.global > 0) {
    double global_sum = 0.0;
    for (const SampleGrid& g : orderings) {
      const Image ref_field = gather_grid(ref, g);
      const Image pred_field = gather_grid(pred, g);
      if (grad == nullptr) {
        global_sum += detail::sum_glance_windows(ref_field, pred_field, windows, params, nullptr, 0.0);
        continue;
      }
      Image field_grad(g.rows, g.cols, ref.channels());
      global_sum += detail::sum_glance_windows(ref_field, pred_field, windows, params, &field_grad,
                                               -global_scale);
      const std::size_t ch = ref.channels();
      for (std::size_t cell = 0; cell < g.coords.size(); ++cell) {
        const PixelCoord& at = g.coords[cell];
        for (std::size_t k = 0; k < ch; ++k) {
          grad->at(at.row, at.col, k) += field_grad.data()[cell * ch + k];
        }
      }
    }
    measure += global_scale * global_sum;
  }
  return measure;
}

}  // namespace

void GlanceConfig::validate() const {
  if (window_rows == 0 || window_cols == 0) throw InputError("glance: window must be non-empty");
  if (window_rows > grid_rows || window_cols > grid_cols) {
    throw InputError("glance: window (n_g x m_g) must fit inside the sample grid (n x m)");
  }
  if (stride == 0) throw InputError("glance: stride must be >= 1");
  if (!(stability > 0.0)) throw InputError("glance: stability constant must be > 0");
  if (shuffles == 0) throw InputError("glance: shuffles must be >= 1");
  if (air_threshold && (*air_threshold < 0.0 || *air_threshold > 1.0)) {
    throw InputError("glance: air threshold must lie in [0, 1]");
  }
  if (kernel == Kernel::gaussian && !(kernel_sigma > 0.0)) {
    throw InputError("glance: gaussian kernel sigma must be > 0");
  }
}

SampleGrid select_pixels(const Image& ref, const GlanceConfig& cfg, Rng& rng) {
  cfg.validate();
  if (ref.empty()) throw InputError("select_pixels: empty image");
  std::vector<std::uint32_t> eligible;
  eligible.reserve(ref.pixel_count());
  for (std::size_t r = 0; r < ref.height(); ++r) {
    for (std::size_t c = 0; c < ref.width(); ++c) {
      if (!cfg.air_threshold || ref.intensity(r, c) > *cfg.air_threshold) {
        eligible.push_back(static_cast<std::uint32_t>(r * ref.width() + c));
      }
    }
  }
  if (eligible.empty()) throw InputError("select_pixels: zero eligible pixels");

  SampleGrid grid;
  grid.rows = cfg.grid_rows;
  grid.cols = cfg.grid_cols;
  const std::size_t wanted = grid.rows * grid.cols;
  grid.coords.reserve(wanted);
  const std::size_t available = eligible.size();
  auto to_coord = [&](std::uint32_t idx) { return PixelCoord{idx / ref.width(), idx % ref.width()}; };

  if (available >= wanted) {
    // Partial Fisher-Yates: the first `wanted` slots form a uniform sample.
    for (std::size_t i = 0; i < wanted; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(available - i));
      std::swap(eligible[i], eligible[j]);
      grid.coords.push_back(to_coord(eligible[i]));
    }
  } else {
    grid.degenerate = true;
    for (std::size_t i = 0; i < wanted; ++i) {
      grid.coords.push_back(to_coord(eligible[rng.uniform_index(available)]));
    }
  }
  return grid;
}

SampleGrid reshuffle(const SampleGrid& grid, Rng& rng) {
  SampleGrid out = grid;
  rng.shuffle(std::span<PixelCoord>(out.coords));
  return out;
}

std::vector<SampleGrid> draw_global_sampling(const Image& ref, const GlanceConfig& cfg, Rng& rng) {
  std::vector<SampleGrid> orderings;
  orderings.reserve(cfg.shuffles);
  orderings.push_back(select_pixels(ref, cfg, rng));
  for (std::size_t s = 1; s < cfg.shuffles; ++s) orderings.push_back(reshuffle(orderings.front(), rng));
  return orderings;
}

Image gather_grid(const Image& img, const SampleGrid& grid) {
  const std::size_t ch = img.channels();
  Image field(grid.rows, grid.cols, ch);
  auto out = field.data();
  for (std::size_t cell = 0; cell < grid.coords.size(); ++cell) {
    const PixelCoord& at = grid.coords[cell];
    if (at.row >= img.height() || at.col >= img.width()) {
      throw InputError("gather_grid: coordinate outside image");
    }
    for (std::size_t k = 0; k < ch; ++k) out[cell * ch + k] = img.at(at.row, at.col, k);
  }
  return field;
}

std::size_t window_count(std::size_t extent, std::size_t window, std::size_t stride) {
  if (window == 0 || stride == 0 || extent < window) return 0;
  return (extent - window) / stride + 1;
}

GlanceVectorSet build_global_vectors(const Image& img, const SampleGrid& grid, const GlanceConfig& cfg) {
  cfg.validate();
  require_window_fits(grid.rows, grid.cols, cfg, "build_global_vectors");
  const Image field = gather_grid(img, grid);
  return extract_windows(field, cfg, [&](std::size_t r, std::size_t c) { return grid.coords[r * grid.cols + c]; });
}

GlanceVectorSet build_local_vectors(const Image& img, const GlanceConfig& cfg) {
  cfg.validate();
  require_window_fits(img.height(), img.width(), cfg, "build_local_vectors");
  return extract_windows(img, cfg, [](std::size_t r, std::size_t c) { return PixelCoord{r, c}; });
}

std::vector<double> window_weights(const GlanceConfig& cfg, std::size_t channels) {
  if (cfg.kernel == Kernel::uniform) return {};
  const auto spatial = detail::gaussian_weights(cfg.window_rows, cfg.window_cols, cfg.kernel_sigma);
  std::vector<double> w;
  w.reserve(spatial.size() * channels);
  for (double s : spatial) {
    for (std::size_t k = 0; k < channels; ++k) w.push_back(s / static_cast<double>(channels));
  }
  return w;
}

namespace {

double index_of(std::span<const double> v0, std::span<const double> v1, double stability,
                std::span<const double> weights, bool lc) {
  if (v0.size() != v1.size()) throw InputError("glance_index: length mismatch");
  if (v0.size() < 2) throw InputError("glance_index: vectors need at least 2 elements");
  if (!weights.empty() && weights.size() != v0.size()) throw InputError("glance_index: weight length mismatch");
  const detail::WindowView a{v0.data(), v0.size(), 1, v0.size(), 1};
  const detail::WindowView b{v1.data(), v1.size(), 1, v1.size(), 1};
  const detail::GlanceParams params{stability, lc, weights.empty() ? nullptr : weights.data()};
  return detail::glance_window(a, b, params, nullptr, 0.0);
}

}  // namespace

double glance_index(std::span<const double> v0, std::span<const double> v1, double stability,
                    std::span<const double> weights) {
  return index_of(v0, v1, stability, weights, false);
}

double glance_index_lc(std::span<const double> v0, std::span<const double> v1, double stability,
                       std::span<const double> weights) {
  return index_of(v0, v1, stability, weights, true);
}

double glance_im(const GlanceVectorSet& v0, const GlanceVectorSet& v1, const GlanceConfig& cfg) {
  if (v0.size() != v1.size() || v0.length != v1.length) throw InputError("glance_im: set size mismatch");
  if (v0.size() == 0) throw InputError("glance_im: empty vector sets");
  const std::size_t spatial = cfg.window_rows * cfg.window_cols;
  std::vector<double> weights;
  if (cfg.kernel == Kernel::gaussian) {
    if (v0.length % spatial != 0) throw InputError("glance_im: vector length does not match the window");
    weights = window_weights(cfg, v0.length / spatial);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < v0.size(); ++i) {
    sum += index_of(v0.vector(i), v1.vector(i), cfg.stability, weights, cfg.lc_augment);
  }
  return sum / static_cast<double>(v0.size());
}

double glance_im(const Image& ref, const Image& pred, const GlanceConfig& cfg, Rng& rng) {
  require_same_shape(ref, pred, "glance_im");
  std::vector<SampleGrid> orderings;
  if (uses_global(cfg)) orderings = draw_global_sampling(ref, cfg, rng);
  return evaluate(ref, pred, cfg, orderings, nullptr);
}

double glance_im(const Image& ref, const Image& pred, const GlanceConfig& cfg,
                 std::span<const SampleGrid> global_orderings) {
  return evaluate(ref, pred, cfg, global_orderings, nullptr);
}

LossResult ms_glance_loss(const Image& ref, const Image& pred, const GlanceConfig& cfg, Rng& rng) {
  require_same_shape(ref, pred, "ms_glance_loss");
  std::vector<SampleGrid> orderings;
  if (uses_global(cfg)) orderings = draw_global_sampling(ref, cfg, rng);
  return ms_glance_loss(ref, pred, cfg, orderings);
}

LossResult ms_glance_loss(const Image& ref, const Image& pred, const GlanceConfig& cfg,
                          std::span<const SampleGrid> global_orderings) {
  LossResult out{0.0, Image(pred.height(), pred.width(), pred.channels())};
  out.loss = 1.0 - evaluate(ref, pred, cfg, global_orderings, &out.grad);
  return out;
}

}  // namespace msglance
