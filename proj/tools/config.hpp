#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <msglance/glance.hpp>
#include <msglance/mask.hpp>
#include <msglance/siren.hpp>
#include <msglance/ssim.hpp>
#include <msglance/trainer.hpp>

namespace msglance::cli {

struct MaskParams {
  double accel = 5.0;
  double acs = 0.125;
  MaskMode mode = MaskMode::random;
};

/// Everything a command can be configured with. Defaults are the library
/// defaults; a config file overrides them key by key.
struct RunConfig {
  std::uint64_t seed = 0;
  TrainConfig train;
  SirenConfig siren;
  GlanceConfig glance;
  SsimConfig ssim;
  MaskParams mask;

  /// Sets one key from its textual value. Throws InputError for unknown keys
  /// or unparsable values.
  void set(std::string_view key, std::string_view value);

  /// Reads `key = value` lines; '#' starts a comment, blank lines are skipped.
  void load(const std::filesystem::path& path);
  void parse(std::string_view text, std::string_view origin = "<config>");

  /// Sorted `key=value` lines for every key, with canonical number formatting.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;

  /// Copies the seed into train.seed and validates every section.
  void finalize();

  static std::vector<std::string> keys();
};

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace msglance::cli
