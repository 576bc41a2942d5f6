#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "msglance/image.hpp"
#include "msglance/loss.hpp"
#include "msglance/random.hpp"

namespace msglance {

enum class Kernel { uniform, gaussian };

/// Which Glance vector sets enter the measure.
enum class GlanceScope { local, global, multi_scale };

/// How local and global indices are combined in multi-scale mode: one mean
/// over the union of all pairs, or the average of the two per-set means.
enum class Aggregation { union_mean, separate_mean };

struct GlanceConfig {
  std::size_t grid_rows = 96;    ///< n: rows of the reshaped global sample grid
  std::size_t grid_cols = 96;    ///< m
  std::size_t window_rows = 16;  ///< n_g
  std::size_t window_cols = 16;  ///< m_g
  std::size_t stride = 1;
  double stability = 0.03;  ///< C_s, added to numerator and denominator
  std::size_t shuffles = 10;
  /// Air prior: only pixels whose reference intensity exceeds this value are
  /// eligible for global sampling.
  std::optional<double> air_threshold;
  Kernel kernel = Kernel::uniform;
  double kernel_sigma = 1.5;  ///< only used by Kernel::gaussian
  bool lc_augment = false;    ///< multiply each index by SSIM's l and c terms
  GlanceScope scope = GlanceScope::multi_scale;
  Aggregation aggregation = Aggregation::union_mean;

  /// Throws InputError when an invariant is violated.
  void validate() const;
};

/// Ordered global sample: coords[r * cols + c] feeds cell (r, c) of the
/// reshaped grid, for the reference and the prediction alike.
struct SampleGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<PixelCoord> coords;
  /// Fewer eligible pixels than cells; coords were drawn with replacement.
  bool degenerate = false;
};

/// Draws grid_rows * grid_cols coordinates uniformly without replacement from
/// the eligible pixels of `ref`. Throws InputError if nothing is eligible.
SampleGrid select_pixels(const Image& ref, const GlanceConfig& cfg, Rng& rng);

/// Same coordinates in a new random order.
SampleGrid reshuffle(const SampleGrid& grid, Rng& rng);

/// One selection followed by `cfg.shuffles` orderings of it (the first is the
/// selection order itself).
std::vector<SampleGrid> draw_global_sampling(const Image& ref, const GlanceConfig& cfg, Rng& rng);

/// The rows x cols x channels matrix of values of `img` at the grid coords.
Image gather_grid(const Image& img, const SampleGrid& grid);

/// Number of window positions along one axis.
std::size_t window_count(std::size_t extent, std::size_t window, std::size_t stride);

/// Flattened window vectors plus the pixel each element was read from.
struct GlanceVectorSet {
  std::size_t length = 0;  ///< elements per vector
  std::vector<double> values;
  std::vector<PixelCoord> provenance;

  std::size_t size() const noexcept { return length == 0 ? 0 : values.size() / length; }
  std::span<const double> vector(std::size_t i) const {
    return std::span<const double>(values).subspan(i * length, length);
  }
  std::span<const PixelCoord> origin(std::size_t i) const {
    return std::span<const PixelCoord>(provenance).subspan(i * length, length);
  }
};

/// Windows of the reshaped sample grid. Elements are flattened row-major with
/// a pixel's channels adjacent.
GlanceVectorSet build_global_vectors(const Image& img, const SampleGrid& grid, const GlanceConfig& cfg);

/// Dense windows over the full-resolution image.
GlanceVectorSet build_local_vectors(const Image& img, const GlanceConfig& cfg);

/// Per-element weights for one window of `channels`-channel pixels, summing to
/// one. Empty for the uniform kernel.
std::vector<double> window_weights(const GlanceConfig& cfg, std::size_t channels);

/// (cov(v0, v1) + c_s) / (sigma0 sigma1 + c_s) with population statistics.
/// `weights` empty means uniform 1/N.
double glance_index(std::span<const double> v0, std::span<const double> v1, double stability,
                    std::span<const double> weights = {});

/// l(v0, v1) * c(v0, v1) * glance_index(v0, v1) with the SSIM constants
/// c1 = 0.01^2 and c2 = 0.03^2.
double glance_index_lc(std::span<const double> v0, std::span<const double> v1, double stability,
                       std::span<const double> weights = {});

/// Mean pairwise index of two sets extracted the same way.
double glance_im(const GlanceVectorSet& v0, const GlanceVectorSet& v1, const GlanceConfig& cfg);

/// GlanceIM of two images over the vector sets selected by `cfg.scope`.
double glance_im(const Image& ref, const Image& pred, const GlanceConfig& cfg, Rng& rng);
double glance_im(const Image& ref, const Image& pred, const GlanceConfig& cfg,
                 std::span<const SampleGrid> global_orderings);

/// 1 - GlanceIM and its gradient with respect to `pred`. Each call draws a
/// fresh global sampling from `rng`.
LossResult ms_glance_loss(const Image& ref, const Image& pred, const GlanceConfig& cfg, Rng& rng);
LossResult ms_glance_loss(const Image& ref, const Image& pred, const GlanceConfig& cfg,
                          std::span<const SampleGrid> global_orderings);

}  // namespace msglance
