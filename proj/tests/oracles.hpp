#pragma once

// Reference computations used by the unit and acceptance tests. They are coded
// independently of the library routines they check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "stabledn/mlp.hpp"

namespace oracle {

/// CDF of S(alpha, sigma, 0, 0) at x by Fourier inversion of exp(-|sigma t|^alpha):
/// F(x) = 1/2 + (1/pi) * int_0^inf sin(x t) exp(-(sigma t)^alpha) / t dt (composite Simpson).
inline double stable_cdf(double x, double alpha, double sigma) {
    const double upper = std::pow(40.0, 1.0 / alpha) / sigma;
    const int steps = 200000;
    const double h = upper / steps;
    auto f = [&](double t) {
        if (t == 0.0) {
            return x;
        }
        return std::sin(x * t) * std::exp(-std::pow(sigma * t, alpha)) / t;
    };
    double sum = f(0.0) + f(upper);
    for (int i = 1; i < steps; ++i) {
        sum += (i % 2 == 1 ? 4.0 : 2.0) * f(i * h);
    }
    return 0.5 + sum * h / 3.0 / std::numbers::pi;
}

/// Moduli of the roots of 1 - a z - b z^2 via the quadratic formula.
inline std::vector<double> ar2_root_moduli(double a, double b) {
    if (b == 0.0) {
        return {a == 0.0 ? INFINITY : 1.0 / std::abs(a)};
    }
    // b z^2 + a z - 1 = 0
    const double disc = a * a + 4.0 * b;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return {std::abs((-a + s) / (2.0 * b)), std::abs((-a - s) / (2.0 * b))};
    }
    const double re = -a / (2.0 * b);
    const double im = std::sqrt(-disc) / (2.0 * b);
    const double mod = std::hypot(re, im);
    return {mod, mod};
}

/// Loop-based forward pass with no Eigen expressions.
inline std::vector<double> mlp_forward(const stabledn::NetworkState& net, std::span<const double> x) {
    std::vector<double> a(x.begin(), x.end());
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const auto& layer = net.layers[l];
        std::vector<double> z(static_cast<std::size_t>(layer.weights.rows()));
        for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
            double s = layer.bias(i);
            for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) {
                s += layer.weights(i, j) * a[static_cast<std::size_t>(j)];
            }
            const bool hidden = l + 1 < net.layers.size();
            z[static_cast<std::size_t>(i)] = hidden ? std::max(0.0, s) : s;
        }
        a = std::move(z);
    }
    return a;
}

struct GradCheck {
    double max_rel_error = 0.0;
    std::size_t parameters = 0;
};

/// Central differences on every weight and bias; relative error |a - n| / max(|a|, |n|),
/// skipping parameters whose analytic and numeric gradients are both below `zero`.
inline GradCheck gradient_check(const stabledn::NetworkState& net, const Eigen::MatrixXd& inputs,
                                const Eigen::MatrixXd& targets, double step = 1e-5,
                                double zero = 1e-10) {
    stabledn::Gradients grads;
    stabledn::loss_and_gradients(net, inputs, targets, grads);
    stabledn::NetworkState probe = net;
    GradCheck out;
    auto check = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + step;
        const double up = stabledn::batch_loss(probe, inputs, targets);
        param = saved - step;
        const double down = stabledn::batch_loss(probe, inputs, targets);
        param = saved;
        const double numeric = (up - down) / (2.0 * step);
        ++out.parameters;
        const double scale = std::max(std::abs(analytic), std::abs(numeric));
        if (scale < zero) {
            return;
        }
        out.max_rel_error = std::max(out.max_rel_error, std::abs(analytic - numeric) / scale);
    };
    for (std::size_t l = 0; l < probe.layers.size(); ++l) {
        auto& layer = probe.layers[l];
        for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
            for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) {
                check(layer.weights(i, j), grads.weights[l](i, j));
            }
            check(layer.bias(i), grads.biases[l](i));
        }
    }
    return out;
}

inline double quantile(std::vector<double> xs, double prob) {
    const auto k = static_cast<std::ptrdiff_t>(prob * static_cast<double>(xs.size() - 1));
    std::nth_element(xs.begin(), xs.begin() + k, xs.end());
    return xs[static_cast<std::size_t>(k)];
}

inline double sample_variance(std::span<const double> xs) {
    double mean = 0.0;
    for (double x : xs) {
        mean += x;
    }
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    return ss / static_cast<double>(xs.size() - 1);
}

/// Largest |F_n(x) - F(x)| over the grid.
template <typename Cdf>
double sup_cdf_error(std::vector<double> sample, std::span<const double> grid, Cdf&& cdf) {
    std::sort(sample.begin(), sample.end());
    double worst = 0.0;
    for (double x : grid) {
        const auto below = std::upper_bound(sample.begin(), sample.end(), x) - sample.begin();
        const double empirical = static_cast<double>(below) / static_cast<double>(sample.size());
        worst = std::max(worst, std::abs(empirical - cdf(x)));
    }
    return worst;
}

}  // namespace oracle
