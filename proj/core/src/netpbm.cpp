#include "msglance/netpbm.hpp"

#include <cctype>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "msglance/error.hpp"

namespace msglance {
namespace {

// Skips whitespace and '#' comments between header tokens.
void skip_separators(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
      in.get();
    } else {
      return;
    }
  }
}

unsigned long read_header_number(std::istream& in, const char* field) {
  skip_separators(in);
  std::string digits;
  while (std::isdigit(in.peek())) digits.push_back(static_cast<char>(in.get()));
  if (digits.empty() || digits.size() > 9) {
    throw InputError(std::string("netpbm: malformed header (") + field + ")");
  }
  return std::stoul(digits);
}

}  // namespace

Image read_netpbm(std::istream& in) {
  char magic[2] = {0, 0};
  if (!in.read(magic, 2) || magic[0] != 'P' ||
      (magic[1] != '2' && magic[1] != '3' && magic[1] != '5' && magic[1] != '6')) {
    throw InputError("netpbm: malformed header (bad magic number)");
  }
  const bool ascii = magic[1] == '2' || magic[1] == '3';
  const std::size_t channels = (magic[1] == '3' || magic[1] == '6') ? 3 : 1;

  const auto width = read_header_number(in, "width");
  const auto height = read_header_number(in, "height");
  const auto maxval = read_header_number(in, "maxval");
  if (width == 0 || height == 0) throw InputError("netpbm: malformed header (zero dimension)");
  if (maxval == 0 || maxval > 65535) {
    throw InputError("netpbm: unsupported maxval " + std::to_string(maxval));
  }

  const std::size_t count = width * height * channels;
  std::vector<double> data(count);
  const double scale = 1.0 / static_cast<double>(maxval);

  if (ascii) {
    for (std::size_t i = 0; i < count; ++i) {
      skip_separators(in);
      unsigned long value = 0;
      if (!(in >> value)) throw InputError("netpbm: truncated payload");
      if (value > maxval) throw InputError("netpbm: sample exceeds maxval");
      data[i] = static_cast<double>(value) * scale;
    }
  } else {
    // Exactly one whitespace byte separates maxval from the raster.
    if (!std::isspace(in.get())) throw InputError("netpbm: malformed header (missing raster separator)");
    const std::size_t bytes_per_sample = maxval < 256 ? 1 : 2;
    std::string raw(count * bytes_per_sample, '\0');
    if (!in.read(raw.data(), static_cast<std::streamsize>(raw.size()))) {
      throw InputError("netpbm: truncated payload");
    }
    for (std::size_t i = 0; i < count; ++i) {
      unsigned long value = static_cast<unsigned char>(raw[i * bytes_per_sample]);
      if (bytes_per_sample == 2) {
        value = (value << 8) | static_cast<unsigned char>(raw[i * 2 + 1]);
      }
      if (value > maxval) throw InputError("netpbm: sample exceeds maxval");
      data[i] = static_cast<double>(value) * scale;
    }
  }
  return Image(height, width, channels, std::move(data));
}

Image load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open image " + path.string());
  try {
    return read_netpbm(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_netpbm(std::ostream& out, const Image& img) {
  if (img.empty()) throw InputError("netpbm: cannot write an empty image");
  out << (img.channels() == 3 ? "P6" : "P5") << '\n'
      << img.width() << ' ' << img.height() << '\n'
      << 255 << '\n';
  std::string raw(img.size(), '\0');
  auto values = img.data();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double level = std::round(std::clamp(values[i], 0.0, 1.0) * 255.0);
    raw[i] = static_cast<char>(static_cast<unsigned char>(level));
  }
  out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
}

void save_image(const std::filesystem::path& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write image " + path.string());
  write_netpbm(out, img);
  if (!out) throw InputError("failed writing image " + path.string());
}

}  // namespace msglance
