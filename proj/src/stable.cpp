#include "stabledn/stable.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "stabledn/errors.hpp"

namespace stabledn {

StableParams StableParams::gaussian(double variance) {
    if (!(variance > 0.0) || !std::isfinite(variance)) {
        throw ParameterError("gaussian variance must be positive and finite, got " +
                             std::to_string(variance));
    }
    return symmetric(2.0, std::sqrt(variance / 2.0));
}

void StableParams::validate() const {
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw ParameterError("stable alpha must lie in (0, 2], got " + std::to_string(alpha));
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ParameterError("stable sigma must be positive, got " + std::to_string(sigma));
    }
    if (!(beta >= -1.0 && beta <= 1.0)) {
        throw ParameterError("stable beta must lie in [-1, 1], got " + std::to_string(beta));
    }
    if (!std::isfinite(mu)) {
        throw ParameterError("stable mu must be finite");
    }
}

namespace {

double draw_unchecked(const StableParams& p, Rng& rng) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    const double v = rng.uniform(-half_pi, half_pi);
    const double w = rng.exponential();

    if (p.alpha == 1.0) {
        const double shifted = half_pi + p.beta * v;
        const double x = (shifted * std::tan(v) -
                          p.beta * std::log(half_pi * w * std::cos(v) / shifted)) /
                         half_pi;
        return p.sigma * x + p.beta * p.sigma * std::log(p.sigma) / half_pi + p.mu;
    }

    const double a = p.alpha;
    const double zeta = p.beta * std::tan(half_pi * a);
    const double b = std::atan(zeta) / a;
    const double s = std::pow(1.0 + zeta * zeta, 1.0 / (2.0 * a));
    const double x = s * std::sin(a * (v + b)) / std::pow(std::cos(v), 1.0 / a) *
                     std::pow(std::cos(v - a * (v + b)) / w, (1.0 - a) / a);
    return p.sigma * x + p.mu;
}

}  // namespace

double draw_stable(const StableParams& params, Rng& rng) {
    params.validate();
    return draw_unchecked(params, rng);
}

std::vector<double> sample_stable(const StableParams& params, std::size_t count, Rng& rng) {
    params.validate();
    std::vector<double> out(count);
    for (auto& x : out) {
        x = draw_unchecked(params, rng);
    }
    return out;
}

double signed_power(double x, double exponent) {
    if (!(exponent >= 0.0)) {
        throw ParameterError("signed power exponent must be nonnegative, got " +
                             std::to_string(exponent));
    }
    if (x == 0.0) {
        return 0.0;
    }
    if (exponent == 1.0) {
        return x;
    }
    return std::copysign(std::pow(std::abs(x), exponent), x);
}

std::vector<double> signed_power(std::span<const double> xs, double exponent) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out[i] = signed_power(xs[i], exponent);
    }
    return out;
}

}  // namespace stabledn
