#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stabledn/rng.hpp"

namespace stabledn {

/// Parameters (alpha, sigma, beta, mu) of an alpha-stable law in the
/// characteristic-function form
///   exp{-sigma^a |z|^a (1 - i beta sign(z) tan(pi a / 2)) + i mu z},  a != 1
///   exp{-sigma |z| (1 + i beta (2/pi) sign(z) ln|z|) + i mu z},        a == 1.
struct StableParams {
    double alpha = 2.0;
    double sigma = 1.0;
    double beta = 0.0;
    double mu = 0.0;

    /// Symmetric alpha-stable law S(alpha, sigma).
    static StableParams symmetric(double alpha, double sigma) { return {alpha, sigma, 0.0, 0.0}; }

    /// Zero-mean Gaussian with the given variance (alpha = 2, sigma^2 = variance / 2).
    static StableParams gaussian(double variance);

    bool is_symmetric() const noexcept { return beta == 0.0 && mu == 0.0; }
    bool is_gaussian() const noexcept { return alpha == 2.0 && is_symmetric(); }

    /// Variance 2 sigma^2 of the alpha = 2 case.
    double gaussian_variance() const noexcept { return 2.0 * sigma * sigma; }

    /// Throws ParameterError unless 0 < alpha <= 2, sigma > 0, |beta| <= 1 and mu finite.
    void validate() const;

    friend bool operator==(const StableParams&, const StableParams&) = default;
};

/// One Chambers-Mallows-Stuck draw.
double draw_stable(const StableParams& params, Rng& rng);

/// `count` i.i.d. draws; deterministic given the state of `rng`.
std::vector<double> sample_stable(const StableParams& params, std::size_t count, Rng& rng);

/// |x|^exponent * sign(x), with sign(0) = 0. Throws ParameterError for a negative exponent.
double signed_power(double x, double exponent);

/// Elementwise signed power.
std::vector<double> signed_power(std::span<const double> xs, double exponent);

}  // namespace stabledn
