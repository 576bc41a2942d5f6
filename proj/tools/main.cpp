#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include <msglance/error.hpp>

#include "allocator.hpp"
#include "commands.hpp"

namespace {

namespace fs = std::filesystem;
using namespace msglance::cli;

enum ExitCode { kOk = 0, kUsage = 1, kInput = 2, kNumerical = 3 };

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<fs::path> config;
  fs::path out_dir = ".";
  std::optional<double> accel;
  std::optional<double> acs;
};

void add_common(CLI::App* cmd, Common& c, bool mask_flags) {
  cmd->add_option("--seed", c.seed, "RNG seed (overrides the config file)");
  cmd->add_option("--config", c.config, "key=value config file")->check(CLI::ExistingFile);
  cmd->add_option("--out-dir", c.out_dir, "directory for artifacts");
  if (mask_flags) {
    cmd->add_option("--accel", c.accel, "acceleration rate (> 1)");
    cmd->add_option("--acs", c.acs, "fraction of centered columns always kept");
  }
}

RunConfig resolve(const Common& c) {
  RunConfig cfg;
  if (c.config) cfg.load(*c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.accel) cfg.mask.accel = *c.accel;
  if (c.acs) cfg.mask.acs = *c.acs;
  cfg.finalize();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  keep_large_blocks_on_heap();
  CLI::App app{"Glance-loss image fitting and MRI undersampling experiments"};
  app.require_subcommand(1);
  Common common;

  MetricArgs metric;
  auto* metric_cmd = app.add_subcommand("metric", "compare two images");
  metric_cmd->add_option("ref", metric.ref, "reference image")->required();
  metric_cmd->add_option("pred", metric.pred, "predicted image")->required();
  metric_cmd->add_option("--metric", metric.metric, "metric")
      ->check(CLI::IsMember({"psnr", "ssim", "glance-local", "glance-global", "msglance", "s3im"}));
  add_common(metric_cmd, common, false);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "fit a SIREN to one image");
  fit_cmd->add_option("target", fit.target, "target image")->required();
  add_common(fit_cmd, common, false);

  MaskArgs mask;
  auto* mask_cmd = app.add_subcommand("mask", "generate a Cartesian column mask");
  mask_cmd->add_option("--width", mask.width, "number of k-space columns")->check(CLI::PositiveNumber);
  add_common(mask_cmd, common, true);

  UndersampleArgs under;
  auto* under_cmd = app.add_subcommand("undersample", "zero-filled reconstruction from masked k-space");
  under_cmd->add_option("image", under.image, "grayscale slice")->required();
  under_cmd->add_flag("--full", under.full, "keep every column");
  add_common(under_cmd, common, true);

  PhantomArgs phantom;
  std::string phantom_kind = "ellipses";
  auto* phantom_cmd = app.add_subcommand("phantom", "write a synthetic head-like slice");
  phantom_cmd->add_option("--size", phantom.size, "height and width")->check(CLI::Range(16, 4096));
  phantom_cmd->add_option("--kind", phantom_kind, "ellipses or smooth")
      ->check(CLI::IsMember({"ellipses", "smooth"}));
  add_common(phantom_cmd, common, false);

  AblateArgs ablate;
  auto* ablate_cmd = app.add_subcommand("ablate", "run an ablation grid of fits");
  ablate_cmd->add_option("--suite", ablate.suite, "kernel, lc, shuffles, nm, ngmg or air-prior")->required();
  ablate_cmd->add_option("target", ablate.target, "image to fit (default: seeded phantom)");
  ablate_cmd->add_option("--phantom-size", ablate.phantom_size, "phantom size when no target is given")
      ->check(CLI::Range(16, 4096));
  add_common(ablate_cmd, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const RunConfig cfg = resolve(common);
    if (*metric_cmd) {
      cmd_metric(metric, cfg, common.out_dir, std::cout);
    } else if (*fit_cmd) {
      cmd_fit(fit, cfg, common.out_dir, std::cout);
    } else if (*mask_cmd) {
      cmd_mask(mask, cfg, common.out_dir, std::cout);
    } else if (*under_cmd) {
      cmd_undersample(under, cfg, common.out_dir, std::cout);
    } else if (*phantom_cmd) {
      phantom.kind = phantom_kind == "smooth" ? msglance::PhantomKind::smooth_gradient
                                              : msglance::PhantomKind::ellipses;
      cmd_phantom(phantom, cfg, common.out_dir, std::cout);
    } else if (*ablate_cmd) {
      cmd_ablate(ablate, cfg, common.out_dir, std::cout);
    }
  } catch (const msglance::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
  return kOk;
}
