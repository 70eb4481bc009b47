#include "stabledn/ar_model.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "stabledn/errors.hpp"

namespace stabledn {

namespace {

void require_symmetric_above_one(const StableParams& law, const char* what) {
    law.validate();
    if (!law.is_symmetric()) {
        throw ParameterError(std::string(what) + " law must be symmetric (beta = 0, mu = 0)");
    }
    if (!(law.alpha > 1.0)) {
        throw ParameterError(std::string(what) + " law must have alpha > 1, got " +
                             std::to_string(law.alpha));
    }
}

}  // namespace

void ArSpec::validate() const {
    if (coefficients.empty()) {
        throw ShapeError("AR order must be positive");
    }
    require_symmetric_above_one(innovation, "innovation");
    const auto report = check_causality(coefficients);
    if (!report.causal) {
        throw ModelError("AR polynomial has a root with modulus " +
                         std::to_string(report.min_root_modulus) + " inside the closed unit disk");
    }
}

void NoisyModelSpec::validate() const {
    ar.validate();
    require_symmetric_above_one(noise, "noise");
}

CausalityReport check_causality(std::span<const double> coefficients) {
    if (coefficients.empty()) {
        throw ShapeError("coefficient vector must be nonempty");
    }
    std::size_t degree = coefficients.size();
    while (degree > 0 && coefficients[degree - 1] == 0.0) {
        --degree;
    }
    if (degree == 0) {
        return {true, std::numeric_limits<double>::infinity()};
    }

    // Roots z of theta(z) are the reciprocals of the companion-matrix eigenvalues.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (std::size_t j = 0; j < degree; ++j) {
        companion(0, j) = coefficients[j];
    }
    for (std::size_t i = 1; i < degree; ++i) {
        companion(i, i - 1) = 1.0;
    }
    const Eigen::VectorXcd eig = companion.eigenvalues();
    double max_modulus = 0.0;
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
        max_modulus = std::max(max_modulus, std::abs(eig(i)));
    }
    const double min_root = max_modulus > 0.0 ? 1.0 / max_modulus
                                              : std::numeric_limits<double>::infinity();
    return {min_root > 1.0, min_root};
}

Series simulate_ar(const ArSpec& spec, std::size_t n, std::size_t burn_in, Rng& rng) {
    spec.validate();
    const std::size_t p = spec.order();
    const std::size_t total = n + burn_in;
    Series full(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        double x = draw_stable(spec.innovation, rng);
        for (std::size_t i = 1; i <= p && i <= t; ++i) {
            x += spec.coefficients[i - 1] * full[t - i];
        }
        full[t] = x;
    }
    return Series(full.begin() + static_cast<std::ptrdiff_t>(burn_in), full.end());
}

Corrupted corrupt(std::span<const double> pure, const StableParams& noise, Rng& rng) {
    require_symmetric_above_one(noise, "noise");
    Corrupted out;
    out.noise_path = sample_stable(noise, pure.size(), rng);
    out.noisy.resize(pure.size());
    for (std::size_t t = 0; t < pure.size(); ++t) {
        out.noisy[t] = pure[t] + out.noise_path[t];
    }
    return out;
}

NoisyDataset simulate_noisy_dataset(const NoisyModelSpec& spec, std::size_t n,
                                    std::size_t n_extra, std::size_t burn_in,
                                    std::uint64_t master_seed) {
    spec.validate();
    Rng innovation_rng(derive_seed(master_seed, "innovation"));
    Rng noise_rng(derive_seed(master_seed, "noise"));

    NoisyDataset ds;
    ds.n = n;
    ds.n_extra = n_extra;
    ds.pure = simulate_ar(spec.ar, n + kForecastMargin + n_extra, burn_in, innovation_rng);
    ds.noisy = corrupt(ds.pure, spec.noise, noise_rng).noisy;
    return ds;
}

void write_series_csv(const std::filesystem::path& path, std::span<const double> values) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << "value\n";
    out.precision(17);
    for (double v : values) {
        out << v << '\n';
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

Series read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError(path.string() + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "value") {
        throw IoError(path.string() + ": expected header 'value', got '" + line + "'");
    }
    Series values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(line, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != line.size() || !std::isfinite(v)) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": not a finite number: '" +
                          line + "'");
        }
        values.push_back(v);
    }
    return values;
}

}  // namespace stabledn
