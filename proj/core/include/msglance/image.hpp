#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace msglance {

struct PixelCoord {
  std::size_t row = 0;
  std::size_t col = 0;

  friend auto operator<=>(const PixelCoord&, const PixelCoord&) = default;
};

/// Dense 2-D scalar field with 1 or 3 channels.
///
/// Storage is row-major with channels interleaved, so the value of channel
/// `c` at (r, x) lives at `(r * width + x) * channels + c`. Images also carry
/// gradients and intermediate fields, so the [0,1] range is a convention of
/// loaders and `normalize_unit`, not a class invariant.
class Image {
 public:
  Image() = default;
  Image(std::size_t height, std::size_t width, std::size_t channels, double fill = 0.0);
  Image(std::size_t height, std::size_t width, std::size_t channels, std::vector<double> data);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept { return height_ * width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& at(std::size_t row, std::size_t col, std::size_t channel = 0) noexcept {
    return data_[(row * width_ + col) * channels_ + channel];
  }
  double at(std::size_t row, std::size_t col, std::size_t channel = 0) const noexcept {
    return data_[(row * width_ + col) * channels_ + channel];
  }

  /// Mean over channels at one pixel.
  double intensity(std::size_t row, std::size_t col) const noexcept;

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool same_shape(const Image& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::size_t channels_ = 1;
  std::vector<double> data_;
};

/// Throws InputError unless `a` and `b` have identical shapes.
void require_same_shape(const Image& a, const Image& b, const char* what);

/// (img - min) / (max - min) over all entries; all zeros when max == min.
Image normalize_unit(const Image& img);

/// Clamps every entry into [0, 1].
Image clamp_unit(const Image& img);

/// Centered out_h x out_w region. Odd margins drop the extra row/column at the
/// bottom/right.
Image center_crop(const Image& img, std::size_t out_h, std::size_t out_w);

double mse(const Image& a, const Image& b);

/// 10 log10(1 / mse) with peak 1; +infinity when the images are identical.
double psnr(const Image& a, const Image& b);

}  // namespace msglance
