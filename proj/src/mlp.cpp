#include "stabledn/mlp.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "stabledn/errors.hpp"

namespace stabledn {

void NetworkState::check_shapes() const {
    if (layer_dims.size() < 2 || layers.size() + 1 != layer_dims.size()) {
        throw ShapeError("network needs at least two layer sizes and one layer per transition");
    }
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto out = static_cast<Eigen::Index>(layer_dims[l + 1]);
        const auto in = static_cast<Eigen::Index>(layer_dims[l]);
        const auto& layer = layers[l];
        const bool ok = layer.weights.rows() == out && layer.weights.cols() == in &&
                        layer.bias.size() == out && layer.weight_m.rows() == out &&
                        layer.weight_m.cols() == in && layer.weight_v.rows() == out &&
                        layer.weight_v.cols() == in && layer.bias_m.size() == out &&
                        layer.bias_v.size() == out;
        if (!ok) {
            throw ShapeError("layer " + std::to_string(l) + " does not match layer_dims");
        }
    }
}

bool NetworkState::all_finite() const {
    for (const auto& layer : layers) {
        if (!layer.weights.allFinite() || !layer.bias.allFinite()) {
            return false;
        }
    }
    return true;
}

void TrainConfig::validate() const {
    if (epochs == 0 || batch_size == 0) {
        throw ParameterError("epochs and batch_size must be positive");
    }
    if (!(learning_rate >= 0.0) || !(weight_decay >= 0.0) || !(epsilon > 0.0)) {
        throw ParameterError("learning_rate and weight_decay must be nonnegative, epsilon positive");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw ParameterError("moment decay rates must lie in [0, 1)");
    }
}

NetworkState init_network(std::uint64_t seed, std::span<const std::size_t> layer_dims) {
    if (layer_dims.size() < 2) {
        throw ShapeError("network needs at least an input and an output size");
    }
    NetworkState state;
    state.layer_dims.assign(layer_dims.begin(), layer_dims.end());
    Rng rng(derive_seed(seed, "init"));
    for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
        const auto in = static_cast<Eigen::Index>(layer_dims[l]);
        const auto out = static_cast<Eigen::Index>(layer_dims[l + 1]);
        if (in == 0 || out == 0) {
            throw ShapeError("layer sizes must be positive");
        }
        const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
        DenseLayer layer;
        layer.weights.resize(out, in);
        for (Eigen::Index j = 0; j < in; ++j) {
            for (Eigen::Index i = 0; i < out; ++i) {
                layer.weights(i, j) = rng.uniform(-limit, limit);
            }
        }
        layer.bias = Eigen::VectorXd::Zero(out);
        layer.weight_m = Eigen::MatrixXd::Zero(out, in);
        layer.weight_v = Eigen::MatrixXd::Zero(out, in);
        layer.bias_m = Eigen::VectorXd::Zero(out);
        layer.bias_v = Eigen::VectorXd::Zero(out);
        state.layers.push_back(std::move(layer));
    }
    return state;
}

namespace {

struct ForwardTrace {
    std::vector<Eigen::MatrixXd> pre;   // pre-activations of each layer
    std::vector<Eigen::MatrixXd> post;  // post[0] is the input, post[l + 1] the output of layer l
};

void check_input_rows(const NetworkState& state, Eigen::Index rows) {
    if (rows != static_cast<Eigen::Index>(state.input_size())) {
        throw ShapeError("network expects inputs of length " + std::to_string(state.input_size()) +
                         ", got " + std::to_string(rows));
    }
}

ForwardTrace run_forward(const NetworkState& state, const Eigen::MatrixXd& inputs) {
    check_input_rows(state, inputs.rows());
    ForwardTrace trace;
    trace.post.push_back(inputs);
    for (std::size_t l = 0; l < state.layers.size(); ++l) {
        const auto& layer = state.layers[l];
        Eigen::MatrixXd z = layer.weights * trace.post.back();
        z.colwise() += layer.bias;
        trace.pre.push_back(z);
        if (l + 1 < state.layers.size()) {
            trace.post.push_back(z.cwiseMax(0.0));
        } else {
            trace.post.push_back(std::move(z));
        }
    }
    return trace;
}

void check_targets(const NetworkState& state, const Eigen::MatrixXd& inputs,
                   const Eigen::MatrixXd& targets) {
    if (targets.rows() != static_cast<Eigen::Index>(state.output_size()) ||
        targets.cols() != inputs.cols() || inputs.cols() == 0) {
        throw ShapeError("targets must be output_size x batch and match the input batch");
    }
}

}  // namespace

Eigen::MatrixXd forward_batch(const NetworkState& state, const Eigen::MatrixXd& inputs) {
    return run_forward(state, inputs).post.back();
}

std::vector<double> forward(const NetworkState& state, std::span<const double> input) {
    check_input_rows(state, static_cast<Eigen::Index>(input.size()));
    const Eigen::Map<const Eigen::VectorXd> x(input.data(), static_cast<Eigen::Index>(input.size()));
    const Eigen::MatrixXd out = forward_batch(state, x);
    return {out.data(), out.data() + out.size()};
}

double batch_loss(const NetworkState& state, const Eigen::MatrixXd& inputs,
                  const Eigen::MatrixXd& targets) {
    check_targets(state, inputs, targets);
    const Eigen::MatrixXd diff = forward_batch(state, inputs) - targets;
    return diff.squaredNorm() / static_cast<double>(diff.size());
}

double loss_and_gradients(const NetworkState& state, const Eigen::MatrixXd& inputs,
                          const Eigen::MatrixXd& targets, Gradients& grads) {
    check_targets(state, inputs, targets);
    const ForwardTrace trace = run_forward(state, inputs);
    const Eigen::MatrixXd diff = trace.post.back() - targets;
    const double scale = 1.0 / static_cast<double>(diff.size());

    const std::size_t count = state.layers.size();
    grads.weights.resize(count);
    grads.biases.resize(count);
    Eigen::MatrixXd delta = 2.0 * scale * diff;
    for (std::size_t l = count; l-- > 0;) {
        grads.weights[l] = delta * trace.post[l].transpose();
        grads.biases[l] = delta.rowwise().sum();
        if (l > 0) {
            delta = (state.layers[l].weights.transpose() * delta).cwiseProduct(
                (trace.pre[l - 1].array() > 0.0).cast<double>().matrix());
        }
    }
    return diff.squaredNorm() * scale;
}

void adamw_step(NetworkState& state, const Gradients& grads, const TrainConfig& cfg) {
    if (grads.weights.size() != state.layers.size() || grads.biases.size() != state.layers.size()) {
        throw ShapeError("gradient list does not match the network");
    }
    ++state.step_count;
    const double t = static_cast<double>(state.step_count);
    const double correction1 = 1.0 - std::pow(cfg.beta1, t);
    const double correction2 = 1.0 - std::pow(cfg.beta2, t);
    const double lr = cfg.learning_rate;
    const double decay = 1.0 - lr * cfg.weight_decay;

    auto update = [&](auto& param, auto& m, auto& v, const auto& g, bool decayed) {
        if (decayed) {
            param *= decay;
        }
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseAbs2();
        param.array() -= lr * (m.array() / correction1) /
                         ((v.array() / correction2).sqrt() + cfg.epsilon);
    };

    for (std::size_t l = 0; l < state.layers.size(); ++l) {
        auto& layer = state.layers[l];
        update(layer.weights, layer.weight_m, layer.weight_v, grads.weights[l], true);
        update(layer.bias, layer.bias_m, layer.bias_v, grads.biases[l], cfg.decay_biases);
    }
}

TrainResult train(NetworkState state, const Dataset& data, const TrainConfig& cfg, Rng& rng) {
    cfg.validate();
    state.check_shapes();
    if (data.empty()) {
        throw ShapeError("training dataset is empty");
    }
    const auto in = static_cast<Eigen::Index>(state.input_size());
    const auto out = static_cast<Eigen::Index>(state.output_size());
    for (const auto& pair : data) {
        if (static_cast<Eigen::Index>(pair.input.size()) != in ||
            static_cast<Eigen::Index>(pair.target.size()) != out) {
            throw ShapeError("training pair does not match the network's input/output sizes");
        }
    }

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    TrainResult result;
    Gradients grads;
    Eigen::MatrixXd inputs;
    Eigen::MatrixXd targets;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[rng.below(i)]);
        }
        double weighted = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            const auto batch = static_cast<Eigen::Index>(stop - start);
            inputs.resize(in, batch);
            targets.resize(out, batch);
            for (Eigen::Index c = 0; c < batch; ++c) {
                const auto& pair = data[order[start + static_cast<std::size_t>(c)]];
                inputs.col(c) = Eigen::Map<const Eigen::VectorXd>(pair.input.data(), in);
                targets.col(c) = Eigen::Map<const Eigen::VectorXd>(pair.target.data(), out);
            }
            const double loss = loss_and_gradients(state, inputs, targets, grads);
            if (!std::isfinite(loss)) {
                throw TrainingDivergence("non-finite training loss in epoch " +
                                             std::to_string(epoch),
                                         epoch);
            }
            adamw_step(state, grads, cfg);
            weighted += loss * static_cast<double>(batch);
        }
        if (!state.all_finite()) {
            throw TrainingDivergence("non-finite parameters after epoch " + std::to_string(epoch),
                                     epoch);
        }
        result.epoch_loss.push_back(weighted / static_cast<double>(order.size()));
    }
    result.state = std::move(state);
    return result;
}

void write_weights_csv(const std::filesystem::path& path, const NetworkState& state) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.precision(17);
    out << "layer,row,col,value\n";
    for (std::size_t l = 0; l < state.layers.size(); ++l) {
        const auto& layer = state.layers[l];
        for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
            for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) {
                out << l << ',' << i << ',' << j << ',' << layer.weights(i, j) << '\n';
            }
            out << l << ',' << i << ',' << layer.weights.cols() << ',' << layer.bias(i) << '\n';
        }
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

}  // namespace stabledn
