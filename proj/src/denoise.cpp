#include "stabledn/denoise.hpp"

#include <algorithm>
#include <string>

#include "stabledn/errors.hpp"

namespace stabledn {

namespace {

std::vector<double> window(std::span<const double> series, std::size_t start, std::size_t q) {
    const auto w = series.subspan(start, q);
    return {w.begin(), w.end()};
}

void require_window_length(std::size_t q) {
    if (q == 0) {
        throw ParameterError("window length q must be positive");
    }
}

WindowMap network_map(const NetworkState& state) {
    return [&state](std::span<const double> w) { return forward(state, w); };
}

TrainResult fit(const WindowSet& windows, const DenoiseConfig& cfg) {
    const NetworkState init = init_network(cfg.train.seed, cfg.layer_dims());
    Rng shuffle(derive_seed(cfg.train.seed, "shuffle"));
    return train(init, windows.pairs, cfg.train, shuffle);
}

Series add_simulated_noise(std::span<const double> series, const StableParams& noise,
                           std::uint64_t seed) {
    Rng rng(seed);
    return corrupt(series, noise, rng).noisy;
}

}  // namespace

WindowSet build_training_windows(std::span<const double> source, std::span<const double> target,
                                 std::size_t q, std::size_t offset_n, double b_prime) {
    require_window_length(q);
    if (source.size() != target.size()) {
        throw ShapeError("source and target series must have equal length");
    }
    const std::size_t n = source.size();
    if (n < 2 * q + offset_n) {
        throw DomainError("series of length " + std::to_string(n) + " is shorter than 2q + N = " +
                          std::to_string(2 * q + offset_n));
    }
    WindowSet set;
    set.q = q;
    set.offset_n = offset_n;
    const Series transformed = signed_power(source, b_prime);
    const std::size_t count = n - 2 * q - offset_n + 1;
    set.pairs.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        const std::size_t ahead = t + q + offset_n;
        set.pairs.push_back({window(transformed, t, q), window(target, ahead, q)});
        set.input_starts.push_back(t);
        set.target_starts.push_back(ahead);
    }
    return set;
}

WindowSet build_training_windows(std::span<const double> noisy, std::size_t q,
                                 std::size_t offset_n, double b_prime) {
    return build_training_windows(noisy, noisy, q, offset_n, b_prime);
}

WindowSet build_aligned_windows(std::span<const double> source, std::span<const double> target,
                                std::size_t q) {
    require_window_length(q);
    if (source.size() != target.size()) {
        throw ShapeError("source and target series must have equal length");
    }
    if (source.size() < q) {
        throw DomainError("series shorter than one window");
    }
    WindowSet set;
    set.q = q;
    const std::size_t count = source.size() - q + 1;
    set.pairs.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        set.pairs.push_back({window(source, t, q), window(target, t, q)});
        set.input_starts.push_back(t);
        set.target_starts.push_back(t);
    }
    return set;
}

void BlindNoiseRange::validate() const {
    if (!(1.0 < alpha_low && alpha_low <= alpha_high && alpha_high <= 2.0)) {
        throw ParameterError("blind noise range needs 1 < alpha_low <= alpha_high <= 2");
    }
    if (!(0.0 < sigma_low && sigma_low <= sigma_high)) {
        throw ParameterError("blind noise range needs 0 < sigma_low <= sigma_high");
    }
}

StableParams BlindNoiseRange::draw(Rng& rng) const {
    validate();
    const double alpha = rng.uniform(alpha_low, alpha_high);
    const double sigma = rng.uniform(sigma_low, sigma_high);
    return StableParams::symmetric(alpha, sigma);
}

Series reconstruct(std::span<const double> input, std::size_t q, const WindowMap& map,
                   InferenceAlignment alignment) {
    require_window_length(q);
    const std::size_t n = input.size();
    auto apply = [&](std::size_t start) {
        auto out = map(input.subspan(start, q));
        if (out.size() != q) {
            throw ShapeError("window map returned " + std::to_string(out.size()) +
                             " values, expected " + std::to_string(q));
        }
        return out;
    };

    Series result(n);
    if (alignment == InferenceAlignment::aligned) {
        if (n < q) {
            throw DomainError("series shorter than one window");
        }
        const std::size_t last = n - q;
        for (std::size_t t = 0; t < last; ++t) {
            result[t] = apply(t)[0];
        }
        const auto tail = apply(last);
        std::copy(tail.begin(), tail.end(), result.begin() + static_cast<std::ptrdiff_t>(last));
        return result;
    }

    if (n < 2 * q) {
        throw DomainError("shifted reconstruction needs at least 2q samples");
    }
    const auto head = apply(0);
    std::copy(head.begin(), head.end(), result.begin());
    const std::size_t last = n - 2 * q;
    for (std::size_t s = 0; s < last; ++s) {
        result[s + q] = apply(s)[0];
    }
    const auto tail = apply(last);
    std::copy(tail.begin(), tail.end(), result.begin() + static_cast<std::ptrdiff_t>(n - q));
    return result;
}

DenoiseResult stable_n2n(std::span<const double> noisy, const DenoiseConfig& cfg) {
    const WindowSet windows = build_training_windows(noisy, cfg.q, cfg.offset_n, cfg.b_prime);
    TrainResult trained = fit(windows, cfg);
    const Series transformed = signed_power(noisy, cfg.b_prime);
    return {reconstruct(transformed, cfg.q, network_map(trained.state), cfg.alignment),
            std::move(trained.epoch_loss)};
}

DenoiseResult nac(std::span<const double> noisy, const StableParams& simulated_noise,
                  const DenoiseConfig& cfg) {
    const Series noisier =
        add_simulated_noise(noisy, simulated_noise, derive_seed(cfg.train.seed, "simulated_noise"));
    const WindowSet windows = build_aligned_windows(noisier, noisy, cfg.q);
    TrainResult trained = fit(windows, cfg);
    return {reconstruct(noisy, cfg.q, network_map(trained.state), cfg.alignment),
            std::move(trained.epoch_loss)};
}

Series nr2n_reconstruct(std::span<const double> noisier, std::size_t q, const WindowMap& map,
                        InferenceAlignment alignment) {
    return reconstruct(
        noisier, q,
        [&map](std::span<const double> w) {
            auto out = map(w);
            for (std::size_t i = 0; i < out.size() && i < w.size(); ++i) {
                out[i] = 2.0 * out[i] - w[i];
            }
            return out;
        },
        alignment);
}

DenoiseResult nr2n(std::span<const double> noisy, std::span<const double> train_extra,
                   const StableParams& simulated_noise, const DenoiseConfig& cfg) {
    const Series extra_noisier = add_simulated_noise(
        train_extra, simulated_noise, derive_seed(cfg.train.seed, "simulated_noise"));
    const WindowSet windows = build_aligned_windows(extra_noisier, train_extra, cfg.q);
    TrainResult trained = fit(windows, cfg);
    const Series noisier =
        add_simulated_noise(noisy, simulated_noise, derive_seed(cfg.train.seed, "inference_noise"));
    return {nr2n_reconstruct(noisier, cfg.q, network_map(trained.state), cfg.alignment),
            std::move(trained.epoch_loss)};
}

DenoiseResult n2c(std::span<const double> noisy, std::span<const double> train_noisy,
                  std::span<const double> train_pure, const DenoiseConfig& cfg) {
    const WindowSet windows = build_aligned_windows(train_noisy, train_pure, cfg.q);
    TrainResult trained = fit(windows, cfg);
    return {reconstruct(noisy, cfg.q, network_map(trained.state), cfg.alignment),
            std::move(trained.epoch_loss)};
}

Series wdn(std::span<const double> noisy) { return {noisy.begin(), noisy.end()}; }

Eigen::MatrixXd fit_affine_window_map(const WindowSet& windows) {
    if (windows.pairs.empty()) {
        throw ShapeError("cannot fit an affine map to an empty window set");
    }
    const auto q = static_cast<Eigen::Index>(windows.q);
    const auto m = static_cast<Eigen::Index>(windows.pairs.size());
    Eigen::MatrixXd design(m, q + 1);
    Eigen::MatrixXd response(m, q);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& pair = windows.pairs[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < q; ++j) {
            design(i, j) = pair.input[static_cast<std::size_t>(j)];
            response(i, j) = pair.target[static_cast<std::size_t>(j)];
        }
        design(i, q) = 1.0;
    }
    // Normal equations are fine here: q + 1 regressors, well-scaled data.
    const Eigen::MatrixXd gram = design.transpose() * design;
    const Eigen::MatrixXd coef = gram.ldlt().solve(design.transpose() * response);
    return coef.transpose();
}

}  // namespace stabledn
