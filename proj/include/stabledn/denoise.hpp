#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "stabledn/ar_model.hpp"
#include "stabledn/mlp.hpp"
#include "stabledn/stable.hpp"

namespace stabledn {

/// Input/target window pairs with the 0-based start index of each side.
struct WindowSet {
    std::size_t q = 10;
    std::size_t offset_n = 0;
    Dataset pairs;
    std::vector<std::size_t> input_starts;
    std::vector<std::size_t> target_starts;

    std::size_t size() const noexcept { return pairs.size(); }
};

/// Self-supervised pairs: input = signed power (b_prime) of window [t, t+q) of `source`,
/// target = raw window [t+q+offset_n, t+2q+offset_n) of `target`. Stride 1, so there are
/// n - 2q - offset_n + 1 pairs. Throws DomainError if the series is too short.
WindowSet build_training_windows(std::span<const double> source, std::span<const double> target,
                                 std::size_t q, std::size_t offset_n, double b_prime);

/// Same with source == target (the noisy series itself).
WindowSet build_training_windows(std::span<const double> noisy, std::size_t q,
                                 std::size_t offset_n, double b_prime);

/// Pairs over identical indices: window [t, t+q) of `source` -> window [t, t+q) of `target`,
/// n - q + 1 pairs, no transform.
WindowSet build_aligned_windows(std::span<const double> source, std::span<const double> target,
                                std::size_t q);

/// Range for blind noise draws: alpha and sigma uniform and independent.
struct BlindNoiseRange {
    double alpha_low = 1.5;
    double alpha_high = 1.9;
    double sigma_low = 1.0;
    double sigma_high = 2.5;

    void validate() const;
    StableParams draw(Rng& rng) const;
};

/// Where the output of the network for the input window starting at t is placed.
enum class InferenceAlignment {
    /// Output of window [t, t+q) is the denoised window [t, t+q).
    aligned,
    /// Output of window [t, t+q) is placed at [t+q, t+2q), matching the training offset.
    /// The first q positions are taken from the first output window.
    shifted,
};

using WindowMap = std::function<std::vector<double>(std::span<const double>)>;

/// Applies `map` to every length-q window of `input` and stitches the overlapping
/// outputs: the first element of each output window, then the full final window.
/// The result always has input.size() samples.
Series reconstruct(std::span<const double> input, std::size_t q, const WindowMap& map,
                   InferenceAlignment alignment = InferenceAlignment::aligned);

struct DenoiseConfig {
    std::size_t q = 10;
    std::size_t hidden = 22;
    /// Exponent applied to Stable-N2N inputs; 1 for Gaussian data.
    double b_prime = 1.0;
    std::size_t offset_n = 0;
    TrainConfig train;
    InferenceAlignment alignment = InferenceAlignment::aligned;

    std::vector<std::size_t> layer_dims() const { return {q, hidden, hidden, q}; }
};

struct DenoiseResult {
    Series denoised;
    std::vector<double> epoch_loss;
};

/// Trains on the noisy series alone (transformed window -> following raw window)
/// and reconstructs from the transformed series.
DenoiseResult stable_n2n(std::span<const double> noisy, const DenoiseConfig& cfg);

/// Noisy-as-clean: trains (noisy + simulated noise) -> noisy on aligned windows,
/// then maps the raw noisy windows.
DenoiseResult nac(std::span<const double> noisy, const StableParams& simulated_noise,
                  const DenoiseConfig& cfg);

/// Noisier2Noise: trains like NAC on `train_extra`, then corrupts the target series once
/// more and returns 2 * net(noisier) - noisier per window.
DenoiseResult nr2n(std::span<const double> noisy, std::span<const double> train_extra,
                   const StableParams& simulated_noise, const DenoiseConfig& cfg);

/// NR2N inference with a given window map; exposed for testing the correction formula.
Series nr2n_reconstruct(std::span<const double> noisier, std::size_t q, const WindowMap& map,
                        InferenceAlignment alignment = InferenceAlignment::aligned);

/// Noise2Clean: supervised training train_noisy -> train_pure on aligned windows.
DenoiseResult n2c(std::span<const double> noisy, std::span<const double> train_noisy,
                  std::span<const double> train_pure, const DenoiseConfig& cfg);

/// Without denoising: the identity.
Series wdn(std::span<const double> noisy);

/// Least-squares affine window map target ~ coef * [input; 1]; coef is q x (q + 1).
Eigen::MatrixXd fit_affine_window_map(const WindowSet& windows);

}  // namespace stabledn
