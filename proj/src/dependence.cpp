#include "stabledn/dependence.hpp"

#include <algorithm>
#include <cstddef>
#include <string>

#include "stabledn/errors.hpp"
#include "stabledn/stable.hpp"

namespace stabledn {

namespace {

struct LagWindow {
    std::ptrdiff_t first;  // 0-based index of t = l1
    std::ptrdiff_t last;   // 0-based index of t = l2
    double divisor;
};

LagWindow lag_window(std::size_t size, int lag) {
    const auto n = static_cast<std::ptrdiff_t>(size);
    const std::ptrdiff_t k = lag;
    const std::ptrdiff_t l1 = std::max<std::ptrdiff_t>(1, 1 + k);
    const std::ptrdiff_t l2 = std::min<std::ptrdiff_t>(n, n + k);
    if (l2 - l1 < 0) {
        throw DomainError("lag " + std::to_string(lag) + " leaves no usable window in a series of length " +
                          std::to_string(size));
    }
    return {l1 - 1, l2 - 1, static_cast<double>(std::max<std::ptrdiff_t>(1, l2 - l1))};
}

}  // namespace

double empirical_autocov(std::span<const double> series, int lag) {
    const auto w = lag_window(series.size(), lag);
    double sum = 0.0;
    for (std::ptrdiff_t t = w.first; t <= w.last; ++t) {
        sum += series[t] * series[t - lag];
    }
    return sum / w.divisor;
}

double empirical_floc(std::span<const double> series, int lag, FlocConfig cfg) {
    if (!(cfg.a_exp >= 0.0) || !(cfg.b_exp >= 0.0)) {
        throw ParameterError("FLOC exponents must be nonnegative");
    }
    const auto w = lag_window(series.size(), lag);
    double sum = 0.0;
    for (std::ptrdiff_t t = w.first; t <= w.last; ++t) {
        sum += signed_power(series[t], cfg.a_exp) * signed_power(series[t - lag], cfg.b_exp);
    }
    return sum / w.divisor;
}

}  // namespace stabledn
