#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "stabledn/errors.hpp"
#include "stabledn/stable.hpp"

using namespace stabledn;

TEST_CASE("alpha = 2 draws are Gaussian with variance 2 sigma^2") {
    Rng rng(11);
    const auto xs = sample_stable(StableParams::symmetric(2.0, 1.0), 1'000'000, rng);
    CHECK(oracle::sample_variance(xs) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("alpha = 1 upper quartile equals sigma") {
    Rng rng(12);
    const auto xs = sample_stable(StableParams::symmetric(1.0, 1.0), 1'000'000, rng);
    CHECK(oracle::quantile(xs, 0.75) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("alpha = 1.5 empirical CDF matches Fourier inversion") {
    Rng rng(13);
    const auto xs = sample_stable(StableParams::symmetric(1.5, 1.0), 1'000'000, rng);
    std::vector<double> grid;
    for (int i = -5; i <= 5; ++i) {
        grid.push_back(i);
    }
    const double err =
        oracle::sup_cdf_error(xs, grid, [](double x) { return oracle::stable_cdf(x, 1.5, 1.0); });
    CHECK(err <= 0.01);
}

TEST_CASE("Fourier oracle reproduces the Cauchy and Gaussian closed forms") {
    CHECK(oracle::stable_cdf(1.0, 1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-4));
    CHECK(oracle::stable_cdf(1.0, 2.0, 1.0) == doctest::Approx(0.5 * std::erfc(-0.5)).epsilon(1e-6));
}

TEST_CASE("sampler scales and shifts") {
    Rng a(5), b(5);
    const auto base = sample_stable(StableParams::symmetric(1.7, 1.0), 100, a);
    const auto scaled = sample_stable({1.7, 3.0, 0.0, 2.0}, 100, b);
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(scaled[i] == doctest::Approx(3.0 * base[i] + 2.0));
    }
}

TEST_CASE("sampler is deterministic and rejects bad parameters") {
    Rng a(99), b(99);
    CHECK(sample_stable(StableParams::symmetric(1.5, 2.0), 50, a) ==
          sample_stable(StableParams::symmetric(1.5, 2.0), 50, b));
    CHECK_THROWS_AS(StableParams::symmetric(0.0, 1.0).validate(), ParameterError);
    CHECK_THROWS_AS(StableParams::symmetric(2.1, 1.0).validate(), ParameterError);
    CHECK_THROWS_AS(StableParams::symmetric(1.5, 0.0).validate(), ParameterError);
    CHECK_THROWS_AS((StableParams{1.5, 1.0, 1.5, 0.0}.validate()), ParameterError);
    Rng r(1);
    CHECK_THROWS_AS(draw_stable(StableParams::symmetric(-1.0, 1.0), r), ParameterError);
}

TEST_CASE("gaussian helper stores sigma = sqrt(variance / 2)") {
    const auto law = StableParams::gaussian(5.0);
    CHECK(law.alpha == 2.0);
    CHECK(law.sigma == doctest::Approx(std::sqrt(2.5)));
    CHECK(law.gaussian_variance() == doctest::Approx(5.0));
    CHECK(law.is_gaussian());
}

TEST_CASE("signed power hand values") {
    CHECK(signed_power(-4.0, 0.5) == -2.0);
    CHECK(signed_power(3.7, 1.0) == 3.7);
    CHECK(signed_power(0.0, 0.45) == 0.0);
    CHECK_THROWS_AS(signed_power(1.0, -0.5), ParameterError);
}

TEST_CASE("signed power is odd and exponent 1 is the identity") {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform(-50.0, 50.0);
        const double b = rng.uniform(0.05, 2.0);
        CHECK(signed_power(-x, b) == -signed_power(x, b));
        CHECK(signed_power(x, 1.0) == x);
        CHECK(std::abs(signed_power(x, b)) == doctest::Approx(std::pow(std::abs(x), b)));
    }
    const std::vector<double> xs{-2.0, 0.0, 9.0};
    CHECK(signed_power(xs, 0.5) == std::vector<double>{-std::sqrt(2.0), 0.0, 3.0});
}

TEST_CASE("derived seeds do not collide across replicates, methods and streams") {
    std::set<std::uint64_t> seen;
    const char* tags[] = {"data", "blind", "wdn", "nr2n", "nac", "stable_n2n", "n2c"};
    for (std::uint64_t m = 0; m < 2000; ++m) {
        const auto s = derive_seed(1, m);
        for (const char* tag : tags) {
            const auto t = derive_seed(s, tag);
            CHECK(seen.insert(t).second);
            CHECK(seen.insert(derive_seed(t, "shuffle")).second);
            CHECK(seen.insert(derive_seed(t, "innovation")).second);
        }
    }
}

TEST_CASE("uniform variates stay in the open unit interval") {
    Rng rng(8);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
    for (int i = 0; i < 1000; ++i) {
        CHECK(rng.below(7) < 7);
    }
}
