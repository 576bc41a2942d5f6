#include "msglance/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "msglance/error.hpp"

namespace msglance {

Image::Image(std::size_t height, std::size_t width, std::size_t channels, double fill)
    : Image(height, width, channels, std::vector<double>(height * width * channels, fill)) {}

Image::Image(std::size_t height, std::size_t width, std::size_t channels, std::vector<double> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  if (channels != 1 && channels != 3) {
    throw InputError("image channels must be 1 or 3, got " + std::to_string(channels));
  }
  if (data_.size() != height * width * channels) {
    throw InputError("image data length does not match height x width x channels");
  }
}

double Image::intensity(std::size_t row, std::size_t col) const noexcept {
  const double* p = &data_[(row * width_ + col) * channels_];
  if (channels_ == 1) return p[0];
  double sum = 0.0;
  for (std::size_t c = 0; c < channels_; ++c) sum += p[c];
  return sum / static_cast<double>(channels_);
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) {
    throw InputError(std::string(what) + ": shape mismatch (" + std::to_string(a.height()) + "x" +
                     std::to_string(a.width()) + "x" + std::to_string(a.channels()) + " vs " +
                     std::to_string(b.height()) + "x" + std::to_string(b.width()) + "x" +
                     std::to_string(b.channels()) + ")");
  }
}

Image normalize_unit(const Image& img) {
  if (img.empty()) throw InputError("normalize_unit: empty image");
  const auto [lo, hi] = std::minmax_element(img.data().begin(), img.data().end());
  Image out(img.height(), img.width(), img.channels());
  const double min = *lo;
  const double range = *hi - *lo;
  if (range == 0.0) return out;
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = (src[i] - min) / range;
  return out;
}

Image clamp_unit(const Image& img) {
  Image out = img;
  for (double& v : out.data()) v = std::clamp(v, 0.0, 1.0);
  return out;
}

Image center_crop(const Image& img, std::size_t out_h, std::size_t out_w) {
  if (out_h > img.height() || out_w > img.width()) {
    throw InputError("center_crop: requested " + std::to_string(out_h) + "x" + std::to_string(out_w) +
                     " exceeds image " + std::to_string(img.height()) + "x" + std::to_string(img.width()));
  }
  const std::size_t top = (img.height() - out_h) / 2;
  const std::size_t left = (img.width() - out_w) / 2;
  const std::size_t ch = img.channels();
  Image out(out_h, out_w, ch);
  for (std::size_t r = 0; r < out_h; ++r) {
    const double* src = &img.data()[((top + r) * img.width() + left) * ch];
    std::copy(src, src + out_w * ch, &out.data()[r * out_w * ch]);
  }
  return out;
}

double mse(const Image& a, const Image& b) {
  require_same_shape(a, b, "mse");
  if (a.empty()) throw InputError("mse: empty images");
  auto x = a.data();
  auto y = b.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sum += d * d;
  }
  return sum / static_cast<double>(x.size());
}

double psnr(const Image& a, const Image& b) {
  const double err = mse(a, b);
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / err);
}

}  // namespace msglance
