// Built with -ffast-math so the loops below map onto glibc's vector sin/cos.
// Keep this file limited to the activation kernel.

#include <cmath>

#include "sine.hpp"

namespace msglance::detail {

void sine_activation(std::span<const double> z, double omega, std::span<double> out_sin,
                     std::span<double> out_slope) {
  const std::size_t n = z.size();
  const double* in = z.data();
  double* s = out_sin.data();
  if (out_slope.empty()) {
    for (std::size_t i = 0; i < n; ++i) s[i] = std::sin(omega * in[i]);
    return;
  }
  double* c = out_slope.data();
  // Two passes: a fused sin/cos loop falls back to scalar sincos.
  for (std::size_t i = 0; i < n; ++i) s[i] = std::sin(omega * in[i]);
  for (std::size_t i = 0; i < n; ++i) c[i] = omega * std::cos(omega * in[i]);
}

}  // namespace msglance::detail
