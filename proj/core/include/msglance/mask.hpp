#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "msglance/random.hpp"

namespace msglance {

enum class MaskMode { random, equispaced };

/// Cartesian column mask with a fully sampled centered calibration block.
struct ColumnMask {
  std::size_t width = 0;
  std::vector<std::uint8_t> keep;
  double accel = 1.0;
  double acs_fraction = 0.125;
  std::size_t acs_columns = 0;
  std::size_t acs_begin = 0;
  std::size_t budget = 0;  ///< round(width / accel)
  /// The calibration block alone exceeded the budget; only it is kept.
  bool acs_only = false;

  std::size_t kept() const;
  /// width / kept
  double effective_acceleration() const;
};

/// Keeps round(acs_fraction * width) centered columns plus extra columns
/// (random without replacement, or evenly spaced) up to round(width / accel).
/// Throws InputError unless accel > 1 and the block has at least one column.
ColumnMask make_uniform_mask(std::size_t width, double accel, double acs_fraction, Rng& rng,
                             MaskMode mode = MaskMode::random);

/// Mask keeping every column.
ColumnMask make_full_mask(std::size_t width);

/// Single CSV line of 0/1 per column.
void write_mask_csv(std::ostream& out, const ColumnMask& mask);

}  // namespace msglance
