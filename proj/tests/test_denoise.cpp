#include <doctest.h>

#include <cmath>

#include "stabledn/ar_model.hpp"
#include "stabledn/denoise.hpp"
#include "stabledn/errors.hpp"
#include "stabledn/estimators.hpp"
#include "stabledn/evaluate.hpp"
#include "stabledn/harness.hpp"

using namespace stabledn;

namespace {

Series iota_series(std::size_t n) {
    Series s(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = static_cast<double>(i) - 3.5;
    }
    return s;
}

const WindowMap identity = [](std::span<const double> w) { return std::vector<double>(w.begin(), w.end()); };

double mean_mae(DenoiseMethod method, double variance, std::size_t m) {
    ExperimentConfig cfg;
    cfg.model.noise = StableParams::gaussian(variance);
    cfg.methods = {method};
    cfg.replicates = m;
    cfg.master_seed = 2024;
    return run_experiment(cfg).rows.front().mean_param_mae;
}

}  // namespace

TEST_CASE("self-supervised window counts and indices") {
    const auto y = iota_series(999);
    const auto set = build_training_windows(y, 10, 0, 1.0);
    CHECK(set.size() == 980);
    CHECK(set.input_starts.front() == 0);
    CHECK(set.target_starts.front() == 10);
    CHECK(set.pairs.front().input == Series(y.begin(), y.begin() + 10));
    CHECK(set.pairs.front().target == Series(y.begin() + 10, y.begin() + 20));
    CHECK(set.pairs.back().target.back() == y.back());

    CHECK(build_training_windows(iota_series(20), 10, 0, 1.0).size() == 1);
    CHECK_THROWS_AS(build_training_windows(iota_series(19), 10, 0, 1.0), DomainError);
    CHECK(build_training_windows(y, 10, 5, 1.0).size() == 975);
    CHECK(build_training_windows(y, 10, 5, 1.0).target_starts.front() == 15);
}

TEST_CASE("signed-power inputs and raw targets") {
    const auto y = iota_series(40);
    const auto set = build_training_windows(y, 10, 0, 0.45);
    for (std::size_t k = 0; k < 10; ++k) {
        CHECK(set.pairs[3].input[k] == signed_power(y[3 + k], 0.45));
        CHECK(set.pairs[3].target[k] == y[13 + k]);
    }
}

TEST_CASE("aligned window counts") {
    const auto y = iota_series(999);
    const auto set = build_aligned_windows(y, y, 10);
    CHECK(set.size() == 990);
    CHECK(set.input_starts[5] == set.target_starts[5]);
    CHECK_THROWS_AS(build_aligned_windows(y, iota_series(998), 10), ShapeError);
}

TEST_CASE("identity map reconstructs the input") {
    const auto y = iota_series(57);
    CHECK(reconstruct(y, 10, identity) == y);
    CHECK(reconstruct(y, 10, identity, InferenceAlignment::shifted).size() == y.size());
}

TEST_CASE("reconstruction always has the input length") {
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const std::size_t q = 1 + rng.below(15);
        const std::size_t n = 2 * q + rng.below(100);
        const auto y = iota_series(n);
        CHECK(reconstruct(y, q, identity).size() == n);
        CHECK(reconstruct(y, q, identity, InferenceAlignment::shifted).size() == n);
    }
}

TEST_CASE("reconstruction takes window heads and the final window") {
    const auto y = iota_series(30);
    // The map tags each output with its window start.
    const WindowMap tag = [&](std::span<const double> w) {
        const double start = w[0] + 3.5;
        std::vector<double> out(w.size());
        for (std::size_t k = 0; k < w.size(); ++k) {
            out[k] = 100.0 * start + static_cast<double>(k);
        }
        return out;
    };
    const auto r = reconstruct(y, 10, tag);
    CHECK(r[0] == 0.0);
    CHECK(r[19] == 1900.0);
    CHECK(r[20] == 2000.0);
    CHECK(r[29] == 2009.0);

    const auto s = reconstruct(y, 10, tag, InferenceAlignment::shifted);
    CHECK(s[3] == 3.0);
    CHECK(s[10] == 0.0);
    CHECK(s[19] == 900.0);
    CHECK(s[20] == 1000.0);
    CHECK(s[29] == 1009.0);
}

TEST_CASE("NR2N with an identity network returns the noisier series") {
    const auto y = iota_series(40);
    CHECK(nr2n_reconstruct(y, 10, identity) == y);
}

TEST_CASE("WDN returns its input") {
    const auto y = iota_series(25);
    CHECK(wdn(y) == y);
}

TEST_CASE("blind noise draws stay inside the range") {
    Rng rng(2);
    const BlindNoiseRange range;
    for (int i = 0; i < 1000; ++i) {
        const auto law = range.draw(rng);
        CHECK(law.alpha >= 1.5);
        CHECK(law.alpha <= 1.9);
        CHECK(law.sigma >= 1.0);
        CHECK(law.sigma <= 2.5);
    }
    CHECK_THROWS_AS((BlindNoiseRange{1.9, 1.5, 1.0, 2.0}.validate()), ParameterError);
}

TEST_CASE("affine least squares recovers an exact linear map") {
    Rng rng(3);
    Eigen::MatrixXd a(4, 5);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        a.data()[i] = rng.normal();
    }
    WindowSet set;
    set.q = 4;
    for (int i = 0; i < 50; ++i) {
        Eigen::VectorXd x(4);
        for (int k = 0; k < 4; ++k) {
            x(k) = rng.normal();
        }
        const Eigen::VectorXd y = a.leftCols(4) * x + a.col(4);
        set.pairs.push_back({{x.data(), x.data() + 4}, {y.data(), y.data() + 4}});
    }
    CHECK((fit_affine_window_map(set) - a).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("denoisers are deterministic for a fixed seed") {
    const NoisyModelSpec spec{{{0.5, 0.3}, StableParams::gaussian(1.0)}, StableParams::gaussian(5.0)};
    const auto ds = simulate_noisy_dataset(spec, 999, 999, kDefaultBurnIn, 4);
    DenoiseConfig cfg;
    cfg.train.seed = 5;
    CHECK(stable_n2n(ds.eval_noisy(), cfg).denoised == stable_n2n(ds.eval_noisy(), cfg).denoised);
    const auto law = StableParams::gaussian(5.0);
    CHECK(nr2n(ds.eval_noisy(), ds.extra_noisy(), law, cfg).denoised ==
          nr2n(ds.eval_noisy(), ds.extra_noisy(), law, cfg).denoised);
    CHECK(nac(ds.eval_noisy(), law, cfg).denoised.size() == 999);
    CHECK(n2c(ds.eval_noisy(), ds.extra_noisy(), ds.extra_pure(), cfg).denoised.size() == 999);
}

TEST_CASE("Stable-N2N on clean data approximates the one-step predictor") {
    // Trained to map a window to the next one, the network returns
    // E[X_{t+q} | X_t..X_{t+q-1}] = 0.5 X_{t+q-1} + 0.3 X_{t+q-2} at position t.
    const NoisyModelSpec spec{{{0.5, 0.3}, StableParams::gaussian(1.0)}, StableParams::gaussian(1e-24)};
    const auto ds = simulate_noisy_dataset(spec, 999, 0, kDefaultBurnIn, 6);
    DenoiseConfig cfg;
    cfg.train.seed = 7;
    const auto out = stable_n2n(ds.eval_noisy(), cfg).denoised;
    const auto x = ds.eval_pure();
    double err = 0.0;
    double scale = 0.0;
    for (std::size_t t = 0; t + cfg.q < x.size(); ++t) {
        const double predictor = 0.5 * x[t + cfg.q - 1] + 0.3 * x[t + cfg.q - 2];
        err += (out[t] - predictor) * (out[t] - predictor);
        scale += predictor * predictor;
    }
    MESSAGE("relative error ", err / scale);
    CHECK(err / scale <= 0.1);
}

TEST_CASE("NAC with negligible simulated noise stays close to WDN") {
    const NoisyModelSpec spec{{{0.5, 0.3}, StableParams::gaussian(1.0)}, StableParams::gaussian(5.0)};
    const std::vector<double> theta{0.5, 0.3};
    double nac_sum = 0.0;
    double wdn_sum = 0.0;
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto ds = simulate_noisy_dataset(spec, 999, 0, kDefaultBurnIn, 10 + s);
        DenoiseConfig cfg;
        cfg.train.seed = 20 + s;
        const auto out = nac(ds.eval_noisy(), StableParams::symmetric(2.0, 1e-12), cfg).denoised;
        nac_sum += param_mae(theta, classical_yw(out, 2).theta_hat);
        wdn_sum += param_mae(theta, classical_yw(ds.eval_noisy(), 2).theta_hat);
    }
    CHECK(std::abs(nac_sum - wdn_sum) / 5.0 <= 0.05);
}

TEST_CASE("N2C with clean targets equal to its inputs learns a near identity") {
    const NoisyModelSpec spec{{{0.5, 0.3}, StableParams::gaussian(1.0)}, StableParams::gaussian(5.0)};
    const auto ds = simulate_noisy_dataset(spec, 999, 999, kDefaultBurnIn, 8);
    DenoiseConfig cfg;
    cfg.train.seed = 9;
    const auto out = n2c(ds.eval_noisy(), ds.extra_noisy(), ds.extra_noisy(), cfg).denoised;
    const auto noisy = ds.eval_noisy();
    double err = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        err += (out[i] - noisy[i]) * (out[i] - noisy[i]);
        scale += noisy[i] * noisy[i];
    }
    CHECK(err / scale <= 0.05);
}

TEST_CASE("reduced-scale denoising bands on Gaussian noise") {
    CHECK(mean_mae(DenoiseMethod::stable_n2n, 5.0, 20) <= 0.15);
    CHECK(mean_mae(DenoiseMethod::nac, 5.0, 20) <= 0.30);
    CHECK(mean_mae(DenoiseMethod::nr2n, 10.0, 20) <= 0.40);
    CHECK(mean_mae(DenoiseMethod::n2c, 15.0, 20) <= 0.20);
}
