#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <msglance/error.hpp>
#include <msglance/netpbm.hpp>
#include <msglance/random.hpp>
#include <msglance/trainer.hpp>

namespace msglance::cli {
namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  return f;
}

std::string num(double v) { return fmt::format("{}", v); }

fs::path image_path(const fs::path& dir, const std::string& stem, const Image& img) {
  return dir / (stem + (img.channels() == 1 ? ".pgm" : ".ppm"));
}

// What the 8-bit writer would store.
Image quantize8(const Image& img) {
  Image out = clamp_unit(img);
  for (auto& v : out.data()) v = std::round(v * 255.0) / 255.0;
  return out;
}

void write_meta(const fs::path& path, const RunConfig& cfg, std::initializer_list<std::pair<std::string, std::string>> extra) {
  auto f = open_output(path);
  f << "config_hash=" << cfg.hash() << '\n' << "rng=" << Rng::algorithm << '\n';
  for (const auto& [k, v] : extra) f << k << '=' << v << '\n';
  f << cfg.canonical();
}

double metric_value(const std::string& metric, const Image& ref, const Image& pred, const RunConfig& cfg) {
  require_same_shape(ref, pred, "metric");
  Rng rng(cfg.seed);
  GlanceConfig g = cfg.glance;
  if (metric == "psnr") return psnr(ref, pred);
  if (metric == "ssim") return ssim(ref, pred, cfg.ssim).mean;
  if (metric == "s3im") return 1.0 - s3im_loss(ref, pred, g, cfg.ssim, rng).loss;
  if (metric == "glance-local") {
    g.scope = GlanceScope::local;
  } else if (metric == "glance-global") {
    g.scope = GlanceScope::global;
  } else if (metric == "msglance") {
    g.scope = GlanceScope::multi_scale;
  } else {
    throw InputError("unknown metric '" + metric + "'");
  }
  return glance_im(ref, pred, g, rng);
}

struct LogWriter {
  std::ofstream file;
  std::string seed;
  std::string hash;

  LogWriter(const fs::path& path, const RunConfig& cfg)
      : file(open_output(path)), seed(std::to_string(cfg.seed)), hash(cfg.hash()) {
    file << "step,total_loss,l2_loss,aux_loss,psnr,ssim,nan_fallbacks,seed,config_hash\n";
    file.flush();
  }

  void row(const StepLog& r) {
    fmt::print(file, "{},{},{},{},{},{},{},{},{}\n", r.step, r.total_loss, r.l2_loss, r.aux_loss, r.psnr, r.ssim,
               r.nan_fallbacks, seed, hash);
    // flushed per row so an aborted run keeps its partial log
    file.flush();
  }
};

bool uses_glance(LossKind k) {
  return k == LossKind::l2_glance_local || k == LossKind::l2_glance_global || k == LossKind::l2_msglance;
}

}  // namespace

void cmd_metric(const MetricArgs& args, const RunConfig& cfg, const fs::path& out_dir, std::ostream& out) {
  const Image ref = load_image(args.ref);
  const Image pred = load_image(args.pred);
  const double value = metric_value(args.metric, ref, pred, cfg);
  auto f = open_output(out_dir / "metric.csv");
  f << "metric,value,seed,config_hash\n";
  f << args.metric << ',' << num(value) << ',' << cfg.seed << ',' << cfg.hash() << '\n';
  out << args.metric << ' ' << num(value) << '\n';
}

void cmd_fit(const FitArgs& args, const RunConfig& cfg, const fs::path& out_dir, std::ostream& out) {
  const Image target = load_image(args.target);
  write_meta(out_dir / "fit_meta.txt", cfg, {{"target", args.target.string()}});
  LogWriter log(out_dir / "fit_log.csv", cfg);
  FitHooks hooks;
  hooks.on_log = [&](const StepLog& r) { log.row(r); };
  const FitResult result = fit_image(target, cfg.train, cfg.siren, cfg.glance, cfg.ssim, hooks);
  save_image(image_path(out_dir, "reconstruction", result.reconstruction), result.reconstruction);
  const StepLog& last = result.log.back();
  out << fmt::format("fit {} steps={} loss={} final_psnr={} final_ssim={} nan_fallbacks={} config_hash={}\n",
                     args.target.filename().string(), cfg.train.steps, to_string(cfg.train.loss), num(last.psnr),
                     num(last.ssim), result.nan_fallbacks, cfg.hash());
}

void cmd_mask(const MaskArgs& args, const RunConfig& cfg, const fs::path& out_dir, std::ostream& out) {
  Rng rng(cfg.seed);
  const ColumnMask m = make_uniform_mask(args.width, cfg.mask.accel, cfg.mask.acs, rng, cfg.mask.mode);
  {
    auto f = open_output(out_dir / "mask.csv");
    write_mask_csv(f, m);
  }
  write_meta(out_dir / "mask_meta.txt", cfg,
             {{"width", std::to_string(m.width)},
              {"acs_columns", std::to_string(m.acs_columns)},
              {"acs_begin", std::to_string(m.acs_begin)},
              {"budget", std::to_string(m.budget)},
              {"kept", std::to_string(m.kept())},
              {"acs_only", m.acs_only ? "true" : "false"},
              {"rounding", "nearest"}});
  out << fmt::format("kept={} width={} effective_accel={:.4f} acs_columns={} budget={}{}\n", m.kept(), m.width,
                     m.effective_acceleration(), m.acs_columns, m.budget,
                     m.acs_only ? " (calibration block exceeds budget; only it is kept)" : "");
}

void cmd_undersample(const UndersampleArgs& args, const RunConfig& cfg, const fs::path& out_dir,
                     std::ostream& out) {
  const Image img = load_image(args.image);
  if (img.channels() != 1) throw InputError("undersample: expected a grayscale (PGM) slice");
  Rng rng(cfg.seed);
  const ColumnMask m =
      args.full ? make_full_mask(img.width()) : make_uniform_mask(img.width(), cfg.mask.accel, cfg.mask.acs, rng,
                                                                  cfg.mask.mode);
  const Undersampled u = undersample(img, m);
  // Metrics are taken on the stored 8-bit images, both scaled to peak 1.
  const Image truth = quantize8(normalize_unit(img));
  const Image zero_filled = quantize8(magnitude(u.zero_filled));
  save_image(out_dir / "zero_filled.pgm", zero_filled);

  GlanceConfig g = cfg.glance;
  g.scope = GlanceScope::multi_scale;
  Rng glance_rng(cfg.seed);
  const double p = psnr(truth, zero_filled);
  const double s = ssim(truth, zero_filled, cfg.ssim).mean;
  const double gim = glance_im(truth, zero_filled, g, glance_rng);

  auto f = open_output(out_dir / "undersample.csv");
  f << "metric,value,kept,seed,config_hash\n";
  const std::string tail = fmt::format("{},{},{}", m.kept(), cfg.seed, cfg.hash());
  f << "psnr," << num(p) << ',' << tail << '\n';
  f << "ssim," << num(s) << ',' << tail << '\n';
  f << "glanceim," << num(gim) << ',' << tail << '\n';
  out << fmt::format("undersample kept={}/{} psnr={} ssim={} glanceim={}\n", m.kept(), m.width, num(p), num(s),
                     num(gim));
}

void cmd_phantom(const PhantomArgs& args, const RunConfig& cfg, const fs::path& out_dir, std::ostream& out) {
  Rng rng(cfg.seed);
  const Image ph = make_phantom(args.size, args.size, args.kind, rng);
  const fs::path path = out_dir / "phantom.pgm";
  save_image(path, ph);
  out << "wrote " << path.string() << '\n';
}

std::vector<AblationCell> ablation_cells(const std::string& suite, const RunConfig& base, std::size_t height,
                                         std::size_t width) {
  std::vector<AblationCell> cells;
  RunConfig glance_base = base;
  if (!uses_glance(glance_base.train.loss)) glance_base.train.loss = LossKind::l2_msglance;

  const std::pair<LossKind, const char*> scopes[] = {{LossKind::l2_glance_local, "local"},
                                                     {LossKind::l2_glance_global, "global"},
                                                     {LossKind::l2_msglance, "msglance"}};
  if (suite == "kernel") {
    for (const auto& [loss, name] : scopes) {
      for (const Kernel k : {Kernel::uniform, Kernel::gaussian}) {
        RunConfig c = base;
        c.train.loss = loss;
        c.glance.kernel = k;
        cells.push_back({fmt::format("{}/{}", name, k == Kernel::uniform ? "uniform" : "gaussian"), c});
      }
    }
  } else if (suite == "lc") {
    for (const auto& [loss, name] : scopes) {
      for (const bool lc : {false, true}) {
        RunConfig c = base;
        c.train.loss = loss;
        c.glance.lc_augment = lc;
        cells.push_back({fmt::format("{}/{}", name, lc ? "s*l*c" : "s"), c});
      }
    }
  } else if (suite == "shuffles") {
    for (const std::size_t k : {1, 5, 10}) {
      RunConfig c = glance_base;
      c.glance.shuffles = k;
      cells.push_back({fmt::format("shuffles={}", k), c});
    }
  } else if (suite == "nm") {
    for (const std::size_t n : {32, 96, 128}) {
      RunConfig c = glance_base;
      c.glance.grid_rows = c.glance.grid_cols = n;
      cells.push_back({fmt::format("{}x{}", n, n), c});
    }
    RunConfig c = glance_base;
    c.glance.grid_rows = height;
    c.glance.grid_cols = width;
    cells.push_back({"whole", c});
  } else if (suite == "ngmg") {
    for (const std::size_t n : {4, 8, 16, 32}) {
      RunConfig c = glance_base;
      c.glance.window_rows = c.glance.window_cols = n;
      cells.push_back({fmt::format("{}x{}", n, n), c});
    }
  } else if (suite == "air-prior") {
    RunConfig unset = glance_base;
    unset.glance.air_threshold.reset();
    cells.push_back({"unset", unset});
    RunConfig set = glance_base;
    set.glance.air_threshold = 0.01;
    cells.push_back({"0.01", set});
  } else {
    throw InputError("unknown ablation suite '" + suite + "' (kernel, lc, shuffles, nm, ngmg, air-prior)");
  }
  return cells;
}

void cmd_ablate(const AblateArgs& args, const RunConfig& cfg, const fs::path& out_dir, std::ostream& out) {
  Image target;
  if (args.target) {
    target = load_image(*args.target);
  } else {
    Rng rng(cfg.seed);
    target = make_phantom(args.phantom_size, args.phantom_size, PhantomKind::ellipses, rng);
  }
  auto cells = ablation_cells(args.suite, cfg, target.height(), target.width());

  auto table = open_output(out_dir / fmt::format("ablate_{}.csv", args.suite));
  // Wall-clock time lives in its own file so the table stays reproducible.
  auto timing = open_output(out_dir / fmt::format("ablate_{}_timing.csv", args.suite));
  table << "suite,cell,setting,loss,seed,config_hash,psnr,ssim,nan_fallbacks\n";
  timing << "cell,setting,runtime_s\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    RunConfig c = cells[i].config;
    c.seed = cfg.seed + i;
    c.finalize();
    const auto t0 = std::chrono::steady_clock::now();
    const FitResult r = fit_image(target, c.train, c.siren, c.glance, c.ssim);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const StepLog& last = r.log.back();
    table << fmt::format("{},{},{},{},{},{},{},{},{}\n", args.suite, i, cells[i].setting, to_string(c.train.loss),
                         c.seed, c.hash(), num(last.psnr), num(last.ssim), r.nan_fallbacks);
    table.flush();
    timing << fmt::format("{},{},{:.3f}\n", i, cells[i].setting, secs);
    out << fmt::format("{:>2} {:<18} psnr={:.3f} ssim={:.4f} nan={} runtime={:.1f}s\n", i, cells[i].setting,
                       last.psnr, last.ssim, r.nan_fallbacks, secs);
  }
}

}  // namespace msglance::cli
