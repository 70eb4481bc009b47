#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace stabledn {

inline constexpr std::size_t kForecastHorizon = 5;

/// (1/p) sum |theta_i - theta_hat_i|. Throws ShapeError on a length mismatch.
double param_mae(std::span<const double> theta_true, std::span<const double> theta_hat);

/// Recursive AR forecast: X_{n+i} = sum_j theta_j X_{n+i-j}, where values at or before
/// n come from `tail` (oldest first, length p) and later ones are earlier forecasts.
std::vector<double> forecast(std::span<const double> tail, std::span<const double> theta,
                             std::size_t horizon = kForecastHorizon);

/// (1/h) sum |truth_t - forecast_t|.
double forecast_mae(std::span<const double> forecast, std::span<const double> truth);

/// Bit flags describing why a trajectory result is incomplete.
enum TrajectoryFlag : std::uint32_t {
    kFlagNone = 0,
    kFlagEstimationFailed = 1u << 0,  // denoised-series estimator refused (ill-conditioned)
    kFlagForecastFailed = 1u << 1,    // errors-in-variables fit for the forecast failed
    kFlagDenoiseFailed = 1u << 2,     // training diverged or denoising threw
    kFlagNoiseEstimateFailed = 1u << 3,
    kFlagTimeLimit = 1u << 4,  // skipped: per-trajectory time budget exhausted
};

struct TrajectoryResult {
    std::string method;
    std::size_t replicate = 0;
    std::vector<double> theta_hat;
    double param_mae = 0.0;
    std::vector<double> forecast;
    double forecast_mae = 0.0;
    std::uint32_t flags = kFlagNone;

    bool param_ok() const noexcept {
        return (flags & (kFlagEstimationFailed | kFlagDenoiseFailed | kFlagNoiseEstimateFailed |
                         kFlagTimeLimit)) == 0;
    }
    bool forecast_ok() const noexcept { return param_ok() && (flags & kFlagForecastFailed) == 0; }
};

}  // namespace stabledn
