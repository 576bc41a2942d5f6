#include "msglance/dft.hpp"

#include <cmath>
#include <numbers>

#include "msglance/error.hpp"

namespace msglance {
namespace {

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// twiddle[k] = exp(sign * 2 pi i k / n), each computed directly
std::vector<Complex> twiddles(std::size_t n, std::size_t count, bool inverse) {
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<Complex> tw(count);
  for (std::size_t k = 0; k < count; ++k) {
    tw[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  }
  return tw;
}

void radix2(std::span<Complex> x, bool inverse) {
  const std::size_t n = x.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  const auto tw = twiddles(n, n / 2, inverse);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex t = tw[k * stride] * x[start + k + half];
        x[start + k + half] = x[start + k] - t;
        x[start + k] += t;
      }
    }
  }
}

void direct(std::span<Complex> x, bool inverse) {
  const std::size_t n = x.size();
  const auto tw = twiddles(n, n, inverse);
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{};
    std::size_t idx = 0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += x[j] * tw[idx];
      idx += k;
      if (idx >= n) idx -= n;
    }
    out[k] = acc;
  }
  std::copy(out.begin(), out.end(), x.begin());
}

// fftshift(dft(ifftshift(x))) on a contiguous buffer, using `tmp` as scratch
void centered(std::span<Complex> x, std::vector<Complex>& tmp, bool inverse) {
  const std::size_t n = x.size();
  const std::size_t h = n / 2;
  tmp.resize(n);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[(i + h) % n];
  dft1(tmp, inverse);
  for (std::size_t k = 0; k < n; ++k) x[k] = tmp[(k + n - h) % n];
}

ComplexGrid transform(const ComplexGrid& in, bool inverse) {
  if (in.height == 0 || in.width == 0 || in.data.size() != in.height * in.width) {
    throw InputError("dft2: empty or inconsistent grid");
  }
  ComplexGrid out = in;
  std::vector<Complex> tmp;
  for (std::size_t r = 0; r < out.height; ++r) {
    centered(std::span<Complex>(out.data).subspan(r * out.width, out.width), tmp, inverse);
  }
  std::vector<Complex> col(out.height);
  for (std::size_t c = 0; c < out.width; ++c) {
    for (std::size_t r = 0; r < out.height; ++r) col[r] = out.at(r, c);
    centered(col, tmp, inverse);
    for (std::size_t r = 0; r < out.height; ++r) out.at(r, c) = col[r];
  }
  return out;
}

}  // namespace

ComplexGrid ComplexGrid::from_real(const Image& img) {
  if (img.channels() != 1) throw InputError("complex grid needs a single-channel image");
  ComplexGrid g(img.height(), img.width());
  const auto src = img.data();
  for (std::size_t i = 0; i < src.size(); ++i) g.data[i] = Complex(src[i], 0.0);
  return g;
}

void dft1(std::span<Complex> values, bool inverse) {
  const std::size_t n = values.size();
  if (n <= 1) return;
  if (power_of_two(n)) {
    radix2(values, inverse);
  } else {
    direct(values, inverse);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : values) v *= scale;
}

ComplexGrid dft2(const ComplexGrid& image) { return transform(image, false); }
ComplexGrid idft2(const ComplexGrid& kspace) { return transform(kspace, true); }

}  // namespace msglance
