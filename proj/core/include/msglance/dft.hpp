#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "msglance/image.hpp"

namespace msglance {

using Complex = std::complex<double>;

/// h x w grid of complex samples, row-major. Used for k-space and for
/// complex-valued images alike.
struct ComplexGrid {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<Complex> data;

  ComplexGrid() = default;
  ComplexGrid(std::size_t h, std::size_t w) : height(h), width(w), data(h * w) {}

  Complex& at(std::size_t r, std::size_t c) { return data[r * width + c]; }
  const Complex& at(std::size_t r, std::size_t c) const { return data[r * width + c]; }

  /// Real part from a single-channel image.
  static ComplexGrid from_real(const Image& img);
};

/// Orthonormal 1-D DFT in place (no shifting). Radix-2 for powers of two,
/// direct summation otherwise.
void dft1(std::span<Complex> values, bool inverse);

/// Centered orthonormal 2-D DFT: zero frequency at (h/2, w/2).
ComplexGrid dft2(const ComplexGrid& image);
ComplexGrid idft2(const ComplexGrid& kspace);

}  // namespace msglance
