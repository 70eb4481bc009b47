#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "stabledn/errors.hpp"

namespace stabledn {

struct Minimum {
    double x = 0.0;
    double value = std::numeric_limits<double>::infinity();
};

/// Golden-section search for a minimum of f on [a, b], stopping once the
/// bracket is narrower than `width`.
template <class F>
Minimum golden_section(F&& f, double a, double b, double width) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > width) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? Minimum{c, fc} : Minimum{d, fd};
}

/// Dense grid over [lo, hi] followed by golden-section refinement inside the
/// two grid cells around the best grid point. Non-finite values are treated
/// as +inf, so the objective may reject points by returning inf or NaN.
template <class F>
Minimum grid_then_golden(F&& f, double lo, double hi, std::size_t grid_points = 1001,
                         double rel_width = 1e-6) {
    if (!(hi >= lo) || grid_points < 2) {
        throw ParameterError("grid_then_golden needs lo <= hi and at least two grid points");
    }
    auto safe = [&](double x) {
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };
    const double step = (hi - lo) / static_cast<double>(grid_points - 1);
    Minimum best;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double x = i + 1 == grid_points ? hi : lo + step * static_cast<double>(i);
        const double v = safe(x);
        if (v < best.value) {
            best = {x, v};
            best_i = i;
        }
    }
    if (!std::isfinite(best.value) || step == 0.0) {
        return best;
    }
    const double a = best_i == 0 ? lo : lo + step * static_cast<double>(best_i - 1);
    const double b = best_i + 1 >= grid_points ? hi : lo + step * static_cast<double>(best_i + 1);
    const Minimum refined = golden_section(safe, a, b, rel_width * (hi - lo));
    return refined.value < best.value ? refined : best;
}

}  // namespace stabledn
