#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "msglance/image.hpp"
#include "msglance/random.hpp"

namespace msglance {

struct SirenConfig {
  std::size_t hidden_width = 256;
  std::size_t depth = 3;  ///< hidden sine layers
  std::size_t out_channels = 1;
  double omega0 = 30.0;        ///< frequency scale of the first layer
  double hidden_omega = 30.0;  ///< frequency scale of later sine layers
  /// Fourier features per axis (sin and cos of 2^k pi x); 0 feeds raw
  /// coordinates.
  std::size_t encoding_frequencies = 0;

  std::size_t in_features() const noexcept { return 2 + 4 * encoding_frequencies; }
  void validate() const;
};

struct DenseLayer {
  Eigen::MatrixXd weight;  ///< out x in
  Eigen::VectorXd bias;
  double omega = 1.0;  ///< sin(omega (W x + b)) when `sine`
  bool sine = true;
};

struct SirenNetwork {
  SirenConfig config;
  std::vector<DenseLayer> layers;

  /// Weight then bias storage of each layer, in layer order.
  std::vector<std::span<double>> parameter_blocks();
  std::size_t parameter_count() const;
};

/// (row, col) coordinates in [-1, 1]^2, one column per pixel in row-major
/// pixel order. A single sample along an axis sits at 0.
Eigen::MatrixXd coord_grid(std::size_t height, std::size_t width);

/// Appends Fourier features to coordinates; identity when frequencies == 0.
Eigen::MatrixXd encode_coords(const Eigen::MatrixXd& coords, std::size_t frequencies);

/// Network inputs for an image of the given size under `cfg`.
Eigen::MatrixXd siren_inputs(std::size_t height, std::size_t width, const SirenConfig& cfg);

/// Layer chain in -> width (x depth) -> out. First layer weights are
/// U(-1/fan_in, 1/fan_in); later ones U(-sqrt(6/fan_in)/omega0, +...).
/// Biases start at zero. Sine layers after the first use hidden_omega.
SirenNetwork siren_init(const SirenConfig& cfg, Rng& rng);

struct ForwardCache {
  std::vector<Eigen::MatrixXd> inputs;    ///< input of each layer
  std::vector<Eigen::MatrixXd> slopes;    ///< omega cos(omega z) of sine layers
};

/// out_channels x batch predictions. The output layer is linear.
Eigen::MatrixXd siren_forward(const SirenNetwork& net, const Eigen::MatrixXd& inputs,
                              ForwardCache* cache = nullptr);

/// Channel-interleaved image view of a prediction (no clamping).
Image output_to_image(const Eigen::MatrixXd& output, std::size_t height, std::size_t width);
Eigen::MatrixXd image_to_output(const Image& img);

struct LayerGradients {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
};

struct SirenGradients {
  std::vector<LayerGradients> layers;

  std::vector<std::span<double>> blocks();
  std::vector<std::span<const double>> blocks() const;
};

/// Reverse-mode gradients of a scalar loss given d loss / d output.
/// Throws InputError if the cache does not belong to this network and batch.
SirenGradients siren_backward(const SirenNetwork& net, const ForwardCache& cache,
                              const Eigen::MatrixXd& grad_output);

}  // namespace msglance
