#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "stabledn/dependence.hpp"
#include "stabledn/errors.hpp"
#include "stabledn/stable.hpp"

using namespace stabledn;

TEST_CASE("autocovariance hand values") {
    const std::vector<double> x{1.0, 2.0, 3.0};
    CHECK(empirical_autocov(x, 0) == 7.0);
    CHECK(empirical_autocov(x, 1) == 8.0);
    CHECK(empirical_autocov(x, -1) == 8.0);
    CHECK(empirical_autocov(x, 2) == 3.0);
    CHECK(empirical_autocov(x, -2) == 3.0);
    CHECK_THROWS_AS(empirical_autocov(x, 3), DomainError);
    CHECK_THROWS_AS(empirical_autocov(x, -3), DomainError);
}

TEST_CASE("FLOC two-point hand value") {
    const std::vector<double> x{-1.0, 4.0};
    CHECK(empirical_floc(x, 1, {1.0, 0.5}) == -4.0);
}

TEST_CASE("white noise autocovariance vanishes") {
    Rng rng(31);
    std::vector<double> x(1'000'000);
    for (auto& v : x) {
        v = rng.normal();
    }
    CHECK(std::abs(empirical_autocov(x, 3)) <= 3.0 / std::sqrt(1e6));
}

TEST_CASE("FLOC with A = B = 1 equals the autocovariance exactly") {
    Rng rng(32);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = sample_stable(StableParams::symmetric(rng.uniform(1.1, 2.0), 1.0), 200, rng);
        for (int k = -20; k <= 20; ++k) {
            CHECK(empirical_floc(x, k, {1.0, 1.0}) == empirical_autocov(x, k));
        }
    }
}

TEST_CASE("FLOC of independent stable streams vanishes") {
    Rng rng(33);
    const std::size_t n = 1'000'000;
    const auto x = sample_stable(StableParams::symmetric(1.5, 1.0), n, rng);
    std::vector<double> terms;
    terms.reserve(n);
    for (std::size_t t = 2; t < n; ++t) {
        terms.push_back(x[t] * signed_power(x[t - 2], 0.45));
    }
    const double se = std::sqrt(oracle::sample_variance(terms) / static_cast<double>(terms.size()));
    CHECK(std::abs(empirical_floc(x, 2, {1.0, 0.45})) <= 3.0 * se);
}

TEST_CASE("FLOC is not symmetric in the lag") {
    const std::vector<double> x{1.0, -3.0, 2.0, 5.0, -1.0};
    CHECK(empirical_floc(x, 1, {1.0, 0.5}) != empirical_floc(x, -1, {1.0, 0.5}));
    // Y_t * Y_{t-k}^<B> summed over t = 2..5 for k = 1, divisor 3
    double s = 0.0;
    for (std::size_t t = 1; t < x.size(); ++t) {
        s += x[t] * signed_power(x[t - 1], 0.5);
    }
    CHECK(empirical_floc(x, 1, {1.0, 0.5}) == doctest::Approx(s / 3.0));
}
