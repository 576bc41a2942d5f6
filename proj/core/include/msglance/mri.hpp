#pragma once

#include <cstddef>

#include "msglance/dft.hpp"
#include "msglance/image.hpp"
#include "msglance/mask.hpp"
#include "msglance/random.hpp"

namespace msglance {

struct Undersampled {
  ComplexGrid zero_filled;  ///< idft2 of the masked k-space
  ComplexGrid kspace;       ///< masked, centered k-space
};

/// dft2, zero the dropped columns, idft2. Throws InputError on a width
/// mismatch or a multi-channel image.
Undersampled undersample(const Image& img, const ColumnMask& mask);

/// sqrt(re^2 + im^2) per pixel, then normalize_unit.
Image magnitude(const ComplexGrid& grid);

enum class PhantomKind { ellipses, smooth_gradient };

/// Synthetic head-like slice: an elliptical object on an exactly zero air
/// background covering at least 20% of the pixels; object intensities are
/// above 0.05. Requires height, width >= 16.
Image make_phantom(std::size_t height, std::size_t width, PhantomKind kind, Rng& rng);

}  // namespace msglance
