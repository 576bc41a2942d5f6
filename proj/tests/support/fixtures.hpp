#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <msglance/image.hpp>
#include <msglance/random.hpp>

namespace fixtures {

// Smooth background plus noise, so windows are neither constant nor white.
inline msglance::Image random_image(std::size_t h, std::size_t w, std::size_t ch, msglance::Rng& rng) {
  msglance::Image img(h, w, ch);
  const double fy = rng.uniform(0.5, 3.0), fx = rng.uniform(0.5, 3.0), phase = rng.uniform(0.0, 6.0);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      for (std::size_t k = 0; k < ch; ++k) {
        const double base = 0.5 + 0.3 * std::sin(fy * static_cast<double>(r) / static_cast<double>(h) * 6.0 + phase +
                                                  fx * static_cast<double>(c) / static_cast<double>(w) * 6.0 +
                                                  static_cast<double>(k));
        img.at(r, c, k) = base + 0.15 * rng.uniform(-1.0, 1.0);
      }
    }
  }
  return img;
}

// `ref` plus noise: a plausible prediction.
inline msglance::Image perturbed(const msglance::Image& ref, double amount, msglance::Rng& rng) {
  msglance::Image out = ref;
  for (double& v : out.data()) v += amount * rng.uniform(-1.0, 1.0);
  return out;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace fixtures
