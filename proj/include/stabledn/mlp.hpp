#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "stabledn/rng.hpp"

namespace stabledn {

/// Fully connected layer with its AdamW moment estimates.
struct DenseLayer {
    Eigen::MatrixXd weights;  // fan_out x fan_in
    Eigen::VectorXd bias;
    Eigen::MatrixXd weight_m, weight_v;
    Eigen::VectorXd bias_m, bias_v;
};

/// Feedforward ReLU network with a linear output layer.
struct NetworkState {
    std::vector<std::size_t> layer_dims;
    std::vector<DenseLayer> layers;
    std::uint64_t step_count = 0;

    std::size_t input_size() const { return layer_dims.front(); }
    std::size_t output_size() const { return layer_dims.back(); }

    /// Throws ShapeError if any matrix disagrees with layer_dims.
    void check_shapes() const;
    bool all_finite() const;
};

inline const std::vector<std::size_t> kDefaultLayerDims{10, 22, 22, 10};

struct TrainConfig {
    std::size_t epochs = 30;
    std::size_t batch_size = 10;
    double learning_rate = 0.001;
    double weight_decay = 0.0001;
    std::uint64_t seed = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    bool decay_biases = false;

    void validate() const;
};

/// Weights uniform in +-sqrt(6 / (fan_in + fan_out)); biases and moments zero.
NetworkState init_network(std::uint64_t seed,
                          std::span<const std::size_t> layer_dims = kDefaultLayerDims);

std::vector<double> forward(const NetworkState& state, std::span<const double> input);

/// Column-per-sample batch forward pass.
Eigen::MatrixXd forward_batch(const NetworkState& state, const Eigen::MatrixXd& inputs);

struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

/// Mean squared error over samples (columns) and output components.
double batch_loss(const NetworkState& state, const Eigen::MatrixXd& inputs,
                  const Eigen::MatrixXd& targets);

/// Loss plus its gradient with respect to every weight and bias.
double loss_and_gradients(const NetworkState& state, const Eigen::MatrixXd& inputs,
                          const Eigen::MatrixXd& targets, Gradients& grads);

/// One decoupled-weight-decay Adam update; increments step_count.
void adamw_step(NetworkState& state, const Gradients& grads, const TrainConfig& cfg);

struct TrainingPair {
    std::vector<double> input;
    std::vector<double> target;
};

using Dataset = std::vector<TrainingPair>;

struct TrainResult {
    NetworkState state;
    /// Sample-weighted mean minibatch loss of each epoch.
    std::vector<double> epoch_loss;
};

/// Minibatch training with per-epoch reshuffling; the last partial batch is kept.
/// Throws TrainingDivergence when the loss or any parameter becomes non-finite.
TrainResult train(NetworkState state, const Dataset& data, const TrainConfig& cfg, Rng& rng);

/// Debug dump with header layer,row,col,value. Biases appear as column fan_in.
void write_weights_csv(const std::filesystem::path& path, const NetworkState& state);

}  // namespace stabledn
