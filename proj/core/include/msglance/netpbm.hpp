#pragma once

#include <filesystem>
#include <iosfwd>

#include "msglance/image.hpp"

namespace msglance {

/// Reads P2/P5 (gray) or P3/P6 (RGB) NetPBM data, dividing by maxval.
/// Throws InputError on a malformed header, maxval outside [1, 65535] or a
/// truncated payload.
Image read_netpbm(std::istream& in);
Image load_image(const std::filesystem::path& path);

/// Writes binary P5 (1 channel) or P6 (3 channels) with maxval 255. Values are
/// clamped to [0, 1] and rounded to the nearest level.
void write_netpbm(std::ostream& out, const Image& img);
void save_image(const std::filesystem::path& path, const Image& img);

}  // namespace msglance
