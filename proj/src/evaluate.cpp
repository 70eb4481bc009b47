#include "stabledn/evaluate.hpp"

#include <cmath>

#include "stabledn/errors.hpp"

namespace stabledn {

double param_mae(std::span<const double> theta_true, std::span<const double> theta_hat) {
    if (theta_true.size() != theta_hat.size() || theta_true.empty()) {
        throw ShapeError("param_mae needs two nonempty vectors of equal length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < theta_true.size(); ++i) {
        sum += std::abs(theta_true[i] - theta_hat[i]);
    }
    return sum / static_cast<double>(theta_true.size());
}

std::vector<double> forecast(std::span<const double> tail, std::span<const double> theta,
                             std::size_t horizon) {
    if (tail.size() != theta.size() || theta.empty()) {
        throw ShapeError("forecast needs a tail of exactly p values for p coefficients");
    }
    const std::size_t p = theta.size();
    std::vector<double> history(tail.begin(), tail.end());
    std::vector<double> out;
    out.reserve(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        double x = 0.0;
        for (std::size_t j = 1; j <= p; ++j) {
            x += theta[j - 1] * history[history.size() - j];
        }
        history.push_back(x);
        out.push_back(x);
    }
    return out;
}

double forecast_mae(std::span<const double> forecast, std::span<const double> truth) {
    if (forecast.size() != truth.size() || forecast.empty()) {
        throw ShapeError("forecast_mae needs equal, nonempty lengths");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < forecast.size(); ++i) {
        sum += std::abs(truth[i] - forecast[i]);
    }
    return sum / static_cast<double>(forecast.size());
}

}  // namespace stabledn
