#pragma once

#include <span>

namespace stabledn {

/// Exponents of FLOC(X, Y, A, B) = E[X^<A> Y^<B>]. The estimator accepts any
/// nonnegative pair; keeping A + B below the stability index is the caller's job.
struct FlocConfig {
    double a_exp = 1.0;
    double b_exp = 1.0;
};

/// Sample autocovariance at lag k,
///   (1 / (l2 - l1)) * sum_{t=l1}^{l2} Y_t Y_{t-k},  l1 = max(1, 1 + k), l2 = min(n, n + k),
/// with 1-based t. The divisor is l2 - l1, one less than the number of summands, and 1
/// when there is a single summand (|k| = n - 1). Throws DomainError when |k| >= n.
double empirical_autocov(std::span<const double> series, int lag);

/// Sample auto-FLOC at lag k with the same index window and divisor as empirical_autocov.
double empirical_floc(std::span<const double> series, int lag, FlocConfig cfg);

}  // namespace stabledn
