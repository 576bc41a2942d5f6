#include "msglance/mri.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "msglance/error.hpp"

namespace msglance {
namespace {

struct Ellipse {
  double cy, cx, ay, ax, theta;

  bool contains(double y, double x) const {
    const double dy = y - cy;
    const double dx = x - cx;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double u = (c * dx + s * dy) / ax;
    const double v = (-s * dx + c * dy) / ay;
    return u * u + v * v <= 1.0;
  }
};

}  // namespace

Undersampled undersample(const Image& img, const ColumnMask& mask) {
  if (img.channels() != 1) throw InputError("undersample: expected a single-channel slice");
  if (mask.width != img.width() || mask.keep.size() != img.width()) {
    throw InputError("undersample: mask width " + std::to_string(mask.width) + " does not match image width " +
                     std::to_string(img.width()));
  }
  Undersampled out;
  out.kspace = dft2(ComplexGrid::from_real(img));
  for (std::size_t r = 0; r < out.kspace.height; ++r) {
    for (std::size_t c = 0; c < out.kspace.width; ++c) {
      if (!mask.keep[c]) out.kspace.at(r, c) = Complex{};
    }
  }
  out.zero_filled = idft2(out.kspace);
  return out;
}

Image magnitude(const ComplexGrid& grid) {
  Image img(grid.height, grid.width, 1);
  auto dst = img.data();
  for (std::size_t i = 0; i < grid.data.size(); ++i) dst[i] = std::abs(grid.data[i]);
  return normalize_unit(img);
}

Image make_phantom(std::size_t height, std::size_t width, PhantomKind kind, Rng& rng) {
  if (height < 16 || width < 16) throw InputError("make_phantom: height and width must be >= 16");

  // Axes at most 0.85 x 0.7 of the half-extent: the head covers under half the frame.
  const Ellipse head{rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05), rng.uniform(0.72, 0.85),
                     rng.uniform(0.55, 0.7), rng.uniform(-0.2, 0.2)};
  const Ellipse brain{head.cy, head.cx, 0.88 * head.ay, 0.88 * head.ax, head.theta};

  std::vector<std::pair<Ellipse, double>> blobs;
  double fy = 0.0, fx = 0.0;
  if (kind == PhantomKind::ellipses) {
    const std::size_t count = 3 + rng.uniform_index(4);
    for (std::size_t i = 0; i < count; ++i) {
      const double rad = 0.5 * std::sqrt(rng.uniform());
      const double ang = rng.uniform(0.0, 2.0 * std::numbers::pi);
      Ellipse e{brain.cy + rad * brain.ay * std::sin(ang), brain.cx + rad * brain.ax * std::cos(ang),
                rng.uniform(0.08, 0.25) * brain.ay, rng.uniform(0.08, 0.25) * brain.ax,
                rng.uniform(0.0, std::numbers::pi)};
      blobs.emplace_back(e, rng.uniform(0.1, 1.0));
    }
  } else {
    fy = rng.uniform(0.5, 2.0);
    fx = rng.uniform(0.5, 2.0);
  }

  Image img(height, width, 1, 0.0);
  for (std::size_t r = 0; r < height; ++r) {
    const double y = (static_cast<double>(r) + 0.5) / static_cast<double>(height) * 2.0 - 1.0;
    for (std::size_t c = 0; c < width; ++c) {
      const double x = (static_cast<double>(c) + 0.5) / static_cast<double>(width) * 2.0 - 1.0;
      if (!head.contains(y, x)) continue;
      double v;
      if (kind == PhantomKind::ellipses) {
        v = 0.9;
        if (brain.contains(y, x)) {
          v = 0.35;
          for (const auto& [e, value] : blobs) {
            if (e.contains(y, x)) v = value;
          }
        }
      } else {
        const double t = 0.5 + 0.25 * (x + y) +
                         0.2 * std::sin(std::numbers::pi * fx * x) * std::cos(std::numbers::pi * fy * y);
        v = 0.1 + 0.9 * std::clamp(t, 0.0, 1.0);
      }
      img.at(r, c, 0) = v;
    }
  }
  return normalize_unit(img);
}

}  // namespace msglance
