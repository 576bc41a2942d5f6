#pragma once

#include <span>

namespace msglance::detail {

/// out_sin = sin(omega z); out_slope = omega cos(omega z) unless empty.
void sine_activation(std::span<const double> z, double omega, std::span<double> out_sin,
                     std::span<double> out_slope);

}  // namespace msglance::detail
