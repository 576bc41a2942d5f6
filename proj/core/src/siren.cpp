#include "msglance/siren.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "msglance/error.hpp"
#include "sine.hpp"

namespace msglance {
namespace {

Eigen::VectorXd linspace_unit(std::size_t n) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    v(static_cast<Eigen::Index>(i)) = n == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

DenseLayer make_layer(std::size_t in, std::size_t out, double bound, double omega, bool sine, Rng& rng) {
  DenseLayer layer;
  layer.weight.resize(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
  for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
    for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = rng.uniform(-bound, bound);
  }
  layer.bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out));
  layer.omega = omega;
  layer.sine = sine;
  return layer;
}

}  // namespace

void SirenConfig::validate() const {
  if (hidden_width == 0 || depth == 0) throw InputError("siren: width and depth must be >= 1");
  if (out_channels != 1 && out_channels != 3) throw InputError("siren: out_channels must be 1 or 3");
  if (!(omega0 > 0.0) || !(hidden_omega > 0.0)) throw InputError("siren: omega must be > 0");
}

std::vector<std::span<double>> SirenNetwork::parameter_blocks() {
  std::vector<std::span<double>> blocks;
  for (DenseLayer& l : layers) {
    blocks.emplace_back(l.weight.data(), static_cast<std::size_t>(l.weight.size()));
    blocks.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
  }
  return blocks;
}

std::size_t SirenNetwork::parameter_count() const {
  std::size_t n = 0;
  for (const DenseLayer& l : layers) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

Eigen::MatrixXd coord_grid(std::size_t height, std::size_t width) {
  const Eigen::VectorXd rows = linspace_unit(height);
  const Eigen::VectorXd cols = linspace_unit(width);
  Eigen::MatrixXd coords(2, static_cast<Eigen::Index>(height * width));
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const auto p = static_cast<Eigen::Index>(r * width + c);
      coords(0, p) = rows(static_cast<Eigen::Index>(r));
      coords(1, p) = cols(static_cast<Eigen::Index>(c));
    }
  }
  return coords;
}

Eigen::MatrixXd encode_coords(const Eigen::MatrixXd& coords, std::size_t frequencies) {
  if (frequencies == 0) return coords;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(2 + 4 * frequencies), coords.cols());
  out.topRows(2) = coords;
  Eigen::Index row = 2;
  for (std::size_t k = 0; k < frequencies; ++k) {
    const double scale = std::ldexp(std::numbers::pi, static_cast<int>(k));
    for (Eigen::Index axis = 0; axis < 2; ++axis) {
      out.row(row++) = (scale * coords.row(axis).array()).sin().matrix();
      out.row(row++) = (scale * coords.row(axis).array()).cos().matrix();
    }
  }
  return out;
}

Eigen::MatrixXd siren_inputs(std::size_t height, std::size_t width, const SirenConfig& cfg) {
  return encode_coords(coord_grid(height, width), cfg.encoding_frequencies);
}

SirenNetwork siren_init(const SirenConfig& cfg, Rng& rng) {
  cfg.validate();
  SirenNetwork net;
  net.config = cfg;
  const std::size_t in = cfg.in_features();
  const std::size_t width = cfg.hidden_width;
  const double hidden_bound = std::sqrt(6.0 / static_cast<double>(width)) / cfg.omega0;
  net.layers.push_back(make_layer(in, width, 1.0 / static_cast<double>(in), cfg.omega0, true, rng));
  for (std::size_t d = 1; d < cfg.depth; ++d) {
    net.layers.push_back(make_layer(width, width, hidden_bound, cfg.hidden_omega, true, rng));
  }
  net.layers.push_back(make_layer(width, cfg.out_channels, hidden_bound, 1.0, false, rng));
  return net;
}

Eigen::MatrixXd siren_forward(const SirenNetwork& net, const Eigen::MatrixXd& inputs, ForwardCache* cache) {
  if (net.layers.empty()) throw InputError("siren_forward: network has no layers");
  if (inputs.rows() != net.layers.front().weight.cols()) {
    throw InputError("siren_forward: expected " + std::to_string(net.layers.front().weight.cols()) +
                     " input features, got " + std::to_string(inputs.rows()));
  }
  if (cache != nullptr) {
    cache->inputs.clear();
    cache->slopes.clear();
  }
  Eigen::MatrixXd x = inputs;
  for (const DenseLayer& layer : net.layers) {
    Eigen::MatrixXd z(layer.weight.rows(), x.cols());
    z.noalias() = layer.weight * x;
    z.colwise() += layer.bias;
    if (cache != nullptr) cache->inputs.push_back(std::move(x));
    if (!layer.sine) {
      if (cache != nullptr) cache->slopes.emplace_back();
      x = std::move(z);
      continue;
    }
    Eigen::MatrixXd activated(z.rows(), z.cols());
    const auto n = static_cast<std::size_t>(z.size());
    if (cache != nullptr) {
      Eigen::MatrixXd slope(z.rows(), z.cols());
      detail::sine_activation({z.data(), n}, layer.omega, {activated.data(), n}, {slope.data(), n});
      cache->slopes.push_back(std::move(slope));
    } else {
      detail::sine_activation({z.data(), n}, layer.omega, {activated.data(), n}, {});
    }
    x = std::move(activated);
  }
  return x;
}

Image output_to_image(const Eigen::MatrixXd& output, std::size_t height, std::size_t width) {
  if (static_cast<std::size_t>(output.cols()) != height * width) {
    throw InputError("output_to_image: batch does not match image size");
  }
  const auto ch = static_cast<std::size_t>(output.rows());
  // Column-major C x P storage is already channel-interleaved pixel order.
  return Image(height, width, ch, std::vector<double>(output.data(), output.data() + output.size()));
}

Eigen::MatrixXd image_to_output(const Image& img) {
  return Eigen::Map<const Eigen::MatrixXd>(img.data().data(), static_cast<Eigen::Index>(img.channels()),
                                           static_cast<Eigen::Index>(img.pixel_count()));
}

std::vector<std::span<double>> SirenGradients::blocks() {
  std::vector<std::span<double>> out;
  for (LayerGradients& l : layers) {
    out.emplace_back(l.weight.data(), static_cast<std::size_t>(l.weight.size()));
    out.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
  }
  return out;
}

std::vector<std::span<const double>> SirenGradients::blocks() const {
  std::vector<std::span<const double>> out;
  for (const LayerGradients& l : layers) {
    out.emplace_back(l.weight.data(), static_cast<std::size_t>(l.weight.size()));
    out.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
  }
  return out;
}

SirenGradients siren_backward(const SirenNetwork& net, const ForwardCache& cache, const Eigen::MatrixXd& grad_output) {
  const std::size_t depth = net.layers.size();
  if (cache.inputs.size() != depth || cache.slopes.size() != depth) {
    throw InputError("siren_backward: cache does not match network depth");
  }
  const Eigen::Index batch = cache.inputs.front().cols();
  if (grad_output.cols() != batch || grad_output.rows() != net.layers.back().weight.rows()) {
    throw InputError("siren_backward: output gradient shape does not match the cached forward pass");
  }
  SirenGradients grads;
  grads.layers.resize(depth);
  Eigen::MatrixXd g = grad_output;
  for (std::size_t i = depth; i-- > 0;) {
    const DenseLayer& layer = net.layers[i];
    const Eigen::MatrixXd& x = cache.inputs[i];
    if (x.rows() != layer.weight.cols() || x.cols() != batch) {
      throw InputError("siren_backward: cached activation shape mismatch");
    }
    if (layer.sine) {
      const Eigen::MatrixXd& slope = cache.slopes[i];
      if (slope.rows() != g.rows() || slope.cols() != g.cols()) {
        throw InputError("siren_backward: cached slope shape mismatch");
      }
      g.array() *= slope.array();
    }
    grads.layers[i].weight.noalias() = g * x.transpose();
    grads.layers[i].bias = g.rowwise().sum();
    if (i > 0) {
      Eigen::MatrixXd next(layer.weight.cols(), batch);
      next.noalias() = layer.weight.transpose() * g;
      g = std::move(next);
    }
  }
  return grads;
}

}  // namespace msglance
