#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "stabledn/rng.hpp"
#include "stabledn/stable.hpp"

namespace stabledn {

/// An ordered sequence of real samples; index 0 corresponds to t = 1.
using Series = std::vector<double>;

/// Causal SaS-AR(p): X_t = theta_1 X_{t-1} + ... + theta_p X_{t-p} + xi_t.
struct ArSpec {
    std::vector<double> coefficients;
    StableParams innovation = StableParams::gaussian(1.0);

    std::size_t order() const noexcept { return coefficients.size(); }

    /// Throws ParameterError on a bad innovation law and ModelError when not causal.
    void validate() const;
};

/// Y_t = X_t + Z_t with i.i.d. symmetric stable noise Z independent of X.
struct NoisyModelSpec {
    ArSpec ar;
    StableParams noise = StableParams::gaussian(1.0);

    bool is_gaussian() const noexcept { return ar.innovation.is_gaussian() && noise.is_gaussian(); }

    void validate() const;
};

struct CausalityReport {
    bool causal = true;
    /// Smallest |z| over the roots of 1 - theta_1 z - ... - theta_p z^p (inf if there are none).
    double min_root_modulus = 0.0;
};

/// Root test of the AR polynomial. Throws ShapeError on an empty vector.
CausalityReport check_causality(std::span<const double> coefficients);

inline constexpr std::size_t kDefaultBurnIn = 1000;

/// Simulates the recursion from zero initial conditions, discarding `burn_in` samples.
Series simulate_ar(const ArSpec& spec, std::size_t n, std::size_t burn_in, Rng& rng);

struct Corrupted {
    Series noisy;
    Series noise_path;
};

/// Adds an i.i.d. draw from `noise` to every sample.
Corrupted corrupt(std::span<const double> pure, const StableParams& noise, Rng& rng);

/// Number of samples following the experiment window that serve as forecast ground truth.
inline constexpr std::size_t kForecastMargin = 11;

/// One long simulated trajectory laid out as
///   [0, n)                          experiment series
///   [n, n + kForecastMargin)        forecast ground truth
///   [n + kForecastMargin, total)    paired training data for dataset-based methods
struct NoisyDataset {
    Series pure;
    Series noisy;
    std::size_t n = 0;
    std::size_t n_extra = 0;

    std::span<const double> eval_pure() const { return {pure.data(), n}; }
    std::span<const double> eval_noisy() const { return {noisy.data(), n}; }
    std::span<const double> forecast_truth() const { return {pure.data() + n, kForecastMargin}; }
    std::span<const double> extra_pure() const {
        return {pure.data() + n + kForecastMargin, n_extra};
    }
    std::span<const double> extra_noisy() const {
        return {noisy.data() + n + kForecastMargin, n_extra};
    }
};

/// Simulates pure and noisy paths of length n + kForecastMargin + n_extra.
/// The master seed is split into independent innovation and noise streams.
NoisyDataset simulate_noisy_dataset(const NoisyModelSpec& spec, std::size_t n,
                                    std::size_t n_extra, std::size_t burn_in,
                                    std::uint64_t master_seed);

/// One-column CSV with header "value".
void write_series_csv(const std::filesystem::path& path, std::span<const double> values);
Series read_series_csv(const std::filesystem::path& path);

}  // namespace stabledn
