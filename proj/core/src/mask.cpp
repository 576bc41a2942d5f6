#include "msglance/mask.hpp"

#include <cmath>
#include <algorithm>
#include <ostream>

#include "msglance/error.hpp"

namespace msglance {

std::size_t ColumnMask::kept() const { return static_cast<std::size_t>(std::count(keep.begin(), keep.end(), 1)); }

double ColumnMask::effective_acceleration() const {
  const auto k = kept();
  return k == 0 ? 0.0 : static_cast<double>(width) / static_cast<double>(k);
}

ColumnMask make_uniform_mask(std::size_t width, double accel, double acs_fraction, Rng& rng, MaskMode mode) {
  if (width == 0) throw InputError("mask: width must be positive");
  if (!(accel > 1.0) || !std::isfinite(accel)) throw InputError("mask: acceleration must be > 1");
  if (!(acs_fraction > 0.0) || acs_fraction > 1.0) throw InputError("mask: acs fraction must be in (0, 1]");

  ColumnMask m;
  m.width = width;
  m.accel = accel;
  m.acs_fraction = acs_fraction;
  m.acs_columns = static_cast<std::size_t>(std::llround(acs_fraction * static_cast<double>(width)));
  if (m.acs_columns < 1) throw InputError("mask: calibration block rounds to zero columns");
  m.budget = static_cast<std::size_t>(std::llround(static_cast<double>(width) / accel));
  m.acs_begin = (width - m.acs_columns + 1) / 2;
  m.keep.assign(width, 0);
  for (std::size_t c = m.acs_begin; c < m.acs_begin + m.acs_columns; ++c) m.keep[c] = 1;

  if (m.budget <= m.acs_columns) {
    m.acs_only = m.budget < m.acs_columns;
    return m;
  }
  std::vector<std::size_t> pool;
  pool.reserve(width - m.acs_columns);
  for (std::size_t c = 0; c < width; ++c) {
    if (!m.keep[c]) pool.push_back(c);
  }
  const std::size_t extra = m.budget - m.acs_columns;
  if (mode == MaskMode::random) {
    for (std::size_t i = 0; i < extra; ++i) {
      const std::size_t j = i + rng.uniform_index(pool.size() - i);
      std::swap(pool[i], pool[j]);
      m.keep[pool[i]] = 1;
    }
  } else {
    const double step = static_cast<double>(pool.size()) / static_cast<double>(extra);
    for (std::size_t i = 0; i < extra; ++i) {
      m.keep[pool[static_cast<std::size_t>((static_cast<double>(i) + 0.5) * step)]] = 1;
    }
  }
  return m;
}

ColumnMask make_full_mask(std::size_t width) {
  ColumnMask m;
  m.width = width;
  m.keep.assign(width, 1);
  m.acs_fraction = 1.0;
  m.acs_columns = width;
  m.budget = width;
  return m;
}

void write_mask_csv(std::ostream& out, const ColumnMask& mask) {
  for (std::size_t c = 0; c < mask.width; ++c) {
    if (c) out << ',';
    out << static_cast<int>(mask.keep[c]);
  }
  out << '\n';
}

}  // namespace msglance
