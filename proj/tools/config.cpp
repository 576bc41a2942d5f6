#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include <msglance/error.hpp>

namespace msglance::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw InputError(fmt::format("config: {} = '{}' is not {}", key, value, expected));
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "a number");
  return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "a non-negative integer");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, v, "a boolean");
}

std::string fmt_double(double v) { return fmt::format("{}", v); }
std::string fmt_bool(bool v) { return v ? "true" : "false"; }

std::string_view kernel_name(Kernel k) { return k == Kernel::uniform ? "uniform" : "gaussian"; }
Kernel parse_kernel(std::string_view key, std::string_view v) {
  if (v == "uniform") return Kernel::uniform;
  if (v == "gaussian") return Kernel::gaussian;
  bad_value(key, v, "uniform|gaussian");
}

struct Field {
  std::function<void(RunConfig&, std::string_view key, std::string_view value)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename Member>
Field size_field(Member member) {
  return {[member](RunConfig& c, std::string_view k, std::string_view v) { member(c) = parse_int<std::size_t>(k, v); },
          [member](const RunConfig& c) { return std::to_string(member(c)); }};
}

template <typename Member>
Field double_field(Member member) {
  return {[member](RunConfig& c, std::string_view k, std::string_view v) { member(c) = parse_double(k, v); },
          [member](const RunConfig& c) { return fmt_double(member(c)); }};
}

const std::map<std::string, Field, std::less<>>& fields() {
  static const std::map<std::string, Field, std::less<>> table = [] {
    std::map<std::string, Field, std::less<>> t;
    t["seed"] = {[](RunConfig& c, std::string_view k, std::string_view v) { c.seed = parse_int<std::uint64_t>(k, v); },
                 [](const RunConfig& c) { return std::to_string(c.seed); }};

    t["train.steps"] = size_field([](auto& c) -> auto& { return c.train.steps; });
    t["train.log_every"] = size_field([](auto& c) -> auto& { return c.train.log_every; });
    t["train.aux_coeff"] = double_field([](auto& c) -> auto& { return c.train.aux_coeff; });
    t["train.grad_clip"] = double_field([](auto& c) -> auto& { return c.train.grad_clip; });
    t["train.lr"] = double_field([](auto& c) -> auto& { return c.train.adam.lr; });
    t["train.beta1"] = double_field([](auto& c) -> auto& { return c.train.adam.beta1; });
    t["train.beta2"] = double_field([](auto& c) -> auto& { return c.train.adam.beta2; });
    t["train.epsilon"] = double_field([](auto& c) -> auto& { return c.train.adam.epsilon; });
    t["train.loss"] = {[](RunConfig& c, std::string_view k, std::string_view v) {
                         const auto kind = parse_loss_kind(v);
                         if (!kind) bad_value(k, v, "a known loss (l2, l2+glance_local, l2+glance_global, "
                                                    "l2+msglance, l2+ssim, l2+s3im)");
                         c.train.loss = *kind;
                       },
                       [](const RunConfig& c) { return std::string(to_string(c.train.loss)); }};

    t["siren.hidden_width"] = size_field([](auto& c) -> auto& { return c.siren.hidden_width; });
    t["siren.depth"] = size_field([](auto& c) -> auto& { return c.siren.depth; });
    t["siren.omega0"] = double_field([](auto& c) -> auto& { return c.siren.omega0; });
    t["siren.hidden_omega"] = double_field([](auto& c) -> auto& { return c.siren.hidden_omega; });
    t["siren.encoding_frequencies"] =
        size_field([](auto& c) -> auto& { return c.siren.encoding_frequencies; });

    t["glance.grid_rows"] = size_field([](auto& c) -> auto& { return c.glance.grid_rows; });
    t["glance.grid_cols"] = size_field([](auto& c) -> auto& { return c.glance.grid_cols; });
    t["glance.window_rows"] = size_field([](auto& c) -> auto& { return c.glance.window_rows; });
    t["glance.window_cols"] = size_field([](auto& c) -> auto& { return c.glance.window_cols; });
    t["glance.stride"] = size_field([](auto& c) -> auto& { return c.glance.stride; });
    t["glance.shuffles"] = size_field([](auto& c) -> auto& { return c.glance.shuffles; });
    t["glance.stability"] = double_field([](auto& c) -> auto& { return c.glance.stability; });
    t["glance.kernel_sigma"] = double_field([](auto& c) -> auto& { return c.glance.kernel_sigma; });
    t["glance.kernel"] = {
        [](RunConfig& c, std::string_view k, std::string_view v) { c.glance.kernel = parse_kernel(k, v); },
        [](const RunConfig& c) { return std::string(kernel_name(c.glance.kernel)); }};
    t["glance.lc_augment"] = {
        [](RunConfig& c, std::string_view k, std::string_view v) { c.glance.lc_augment = parse_bool(k, v); },
        [](const RunConfig& c) { return fmt_bool(c.glance.lc_augment); }};
    t["glance.air_threshold"] = {[](RunConfig& c, std::string_view k, std::string_view v) {
                                   if (v == "unset") {
                                     c.glance.air_threshold.reset();
                                   } else {
                                     c.glance.air_threshold = parse_double(k, v);
                                   }
                                 },
                                 [](const RunConfig& c) {
                                   return c.glance.air_threshold ? fmt_double(*c.glance.air_threshold)
                                                                 : std::string("unset");
                                 }};
    t["glance.aggregation"] = {[](RunConfig& c, std::string_view k, std::string_view v) {
                                 if (v == "union") {
                                   c.glance.aggregation = Aggregation::union_mean;
                                 } else if (v == "separate") {
                                   c.glance.aggregation = Aggregation::separate_mean;
                                 } else {
                                   bad_value(k, v, "union|separate");
                                 }
                               },
                               [](const RunConfig& c) {
                                 return std::string(c.glance.aggregation == Aggregation::union_mean ? "union"
                                                                                                    : "separate");
                               }};

    t["ssim.window"] = size_field([](auto& c) -> auto& { return c.ssim.window; });
    t["ssim.stride"] = size_field([](auto& c) -> auto& { return c.ssim.stride; });
    t["ssim.sigma"] = double_field([](auto& c) -> auto& { return c.ssim.sigma; });
    t["ssim.k1"] = double_field([](auto& c) -> auto& { return c.ssim.k1; });
    t["ssim.k2"] = double_field([](auto& c) -> auto& { return c.ssim.k2; });
    t["ssim.peak"] = double_field([](auto& c) -> auto& { return c.ssim.peak; });
    t["ssim.kernel"] = {
        [](RunConfig& c, std::string_view k, std::string_view v) { c.ssim.kernel = parse_kernel(k, v); },
        [](const RunConfig& c) { return std::string(kernel_name(c.ssim.kernel)); }};

    t["mask.accel"] = double_field([](auto& c) -> auto& { return c.mask.accel; });
    t["mask.acs"] = double_field([](auto& c) -> auto& { return c.mask.acs; });
    t["mask.mode"] = {[](RunConfig& c, std::string_view k, std::string_view v) {
                        if (v == "random") {
                          c.mask.mode = MaskMode::random;
                        } else if (v == "equispaced") {
                          c.mask.mode = MaskMode::equispaced;
                        } else {
                          bad_value(k, v, "random|equispaced");
                        }
                      },
                      [](const RunConfig& c) {
                        return std::string(c.mask.mode == MaskMode::random ? "random" : "equispaced");
                      }};
    return t;
  }();
  return table;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  const auto it = fields().find(key);
  if (it == fields().end()) throw InputError(fmt::format("config: unknown key '{}'", key));
  it->second.set(*this, key, value);
}

void RunConfig::parse(std::string_view text, std::string_view origin) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InputError(fmt::format("{}:{}: expected key = value", origin, line_no));
    }
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  parse(ss.str(), path.string());
}

std::string RunConfig::canonical() const {
  std::string out;
  for (const auto& [key, field] : fields()) {
    out += key;
    out += '=';
    out += field.get(*this);
    out += '\n';
  }
  return out;
}

std::string RunConfig::hash() const { return fmt::format("{:016x}", fnv1a64(canonical())); }

void RunConfig::finalize() {
  train.seed = seed;
  train.validate();
  siren.validate();
  glance.validate();
  ssim.validate();
}

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> out;
  for (const auto& [key, field] : fields()) out.push_back(key);
  return out;
}

}  // namespace msglance::cli
