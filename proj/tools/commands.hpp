#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <msglance/mri.hpp>

#include "config.hpp"

namespace msglance::cli {

struct MetricArgs {
  std::filesystem::path ref;
  std::filesystem::path pred;
  std::string metric = "psnr";
};

struct FitArgs {
  std::filesystem::path target;
};

struct MaskArgs {
  std::size_t width = 256;
};

struct UndersampleArgs {
  std::filesystem::path image;
  bool full = false;  ///< keep every column
};

struct PhantomArgs {
  std::size_t size = 64;
  PhantomKind kind = PhantomKind::ellipses;
};

struct AblateArgs {
  std::string suite;
  std::optional<std::filesystem::path> target;  ///< seeded phantom when absent
  std::size_t phantom_size = 64;
};

// Each command writes its artifacts under out_dir and a human summary to
// `out`. Errors surface as InputError / NumericalError.
void cmd_metric(const MetricArgs& args, const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out);
void cmd_fit(const FitArgs& args, const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out);
void cmd_mask(const MaskArgs& args, const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out);
void cmd_undersample(const UndersampleArgs& args, const RunConfig& cfg, const std::filesystem::path& out_dir,
                     std::ostream& out);
void cmd_phantom(const PhantomArgs& args, const RunConfig& cfg, const std::filesystem::path& out_dir,
                 std::ostream& out);
void cmd_ablate(const AblateArgs& args, const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out);

/// Cells of an ablation suite: a label and the config it runs with (seed not
/// yet offset). Throws InputError for an unknown suite.
struct AblationCell {
  std::string setting;
  RunConfig config;
};
std::vector<AblationCell> ablation_cells(const std::string& suite, const RunConfig& base, std::size_t height,
                                         std::size_t width);

}  // namespace msglance::cli
