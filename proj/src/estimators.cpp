#include "stabledn/estimators.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "stabledn/dependence.hpp"
#include "stabledn/errors.hpp"
#include "stabledn/minimize.hpp"

namespace stabledn {

std::string_view to_string(EstimationMethod method) {
    switch (method) {
        case EstimationMethod::classical_yw: return "classical_yw";
        case EstimationMethod::floc_yw: return "floc_yw";
        case EstimationMethod::eiv_gaussian: return "eiv_gaussian";
        case EstimationMethod::eiv_stable: return "eiv_stable";
    }
    return "unknown";
}

namespace {

void require_length(std::span<const double> series, std::size_t p, std::size_t r) {
    if (p == 0) {
        throw ParameterError("AR order must be positive");
    }
    // The largest lag used is p + r; keep at least two summands at that lag.
    if (series.size() <= p + r + 1) {
        throw DomainError("series of length " + std::to_string(series.size()) +
                          " is too short for order " + std::to_string(p) + " with " +
                          std::to_string(r) + " high-order equations");
    }
}

/// Fills a YwSystem from a lag function g(k), k in [-(p-1), p+r].
YwSystem assemble(const std::function<double(int)>& g, std::size_t p, std::size_t r,
                  bool even_lags) {
    const int ip = static_cast<int>(p);
    YwSystem sys;
    sys.gamma_matrix.resize(ip, ip);
    sys.lambda_vector.resize(ip);
    sys.high_gamma.resize(static_cast<Eigen::Index>(r), ip);
    sys.high_lambda.resize(static_cast<Eigen::Index>(r));
    sys.lag0 = g(0);
    for (int i = 0; i < ip; ++i) {
        for (int j = 0; j < ip; ++j) {
            sys.gamma_matrix(i, j) = even_lags ? g(j - i) : g(i - j);
        }
        sys.lambda_vector(i) = g(i + 1);
    }
    for (int i = 0; i < static_cast<int>(r); ++i) {
        for (int j = 0; j < ip; ++j) {
            sys.high_gamma(i, j) = g(ip + i - j);
        }
        sys.high_lambda(i) = g(ip + i + 1);
    }
    return sys;
}

Eigen::MatrixXd shifted(const Eigen::MatrixXd& m, double shift) {
    return m - shift * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

std::vector<double> to_vector(const Eigen::VectorXd& v) {
    return {v.data(), v.data() + v.size()};
}

void require_floc_order(std::size_t p) {
    if (p < 2) {
        throw UnsupportedOrderError("FLOC-based estimators require order p >= 2, got " +
                                    std::to_string(p));
    }
}

EstimationResult finish_eiv(const YwSystem& sys, double lo, double hi, const EivOptions& options,
                            EstimationMethod method) {
    const Minimum best = grid_then_golden([&](double s) { return eiv_objective(sys, s); }, lo, hi,
                                          options.grid_points, options.rel_width);
    if (!std::isfinite(best.value)) {
        throw NumericalError("errors-in-variables objective is singular over the whole interval",
                             std::numeric_limits<double>::infinity());
    }
    EstimationResult res;
    res.method = method;
    res.noise_level = best.x;
    res.theta_hat = to_vector(solve_guarded(shifted(sys.gamma_matrix, best.x), sys.lambda_vector,
                                            &res.condition));
    return res;
}

}  // namespace

YwSystem build_classical_system(std::span<const double> series, std::size_t p, std::size_t r) {
    require_length(series, p, r);
    std::vector<double> cache(p + r + 1);
    for (std::size_t k = 0; k < cache.size(); ++k) {
        cache[k] = empirical_autocov(series, static_cast<int>(k));
    }
    return assemble([&](int k) { return cache[static_cast<std::size_t>(std::abs(k))]; }, p, r, true);
}

YwSystem build_floc_system(std::span<const double> series, std::size_t p, std::size_t r,
                           double b_exp) {
    require_length(series, p, r);
    const int lo = 1 - static_cast<int>(p);
    const int hi = static_cast<int>(p + r);
    const FlocConfig cfg{1.0, b_exp};
    std::vector<double> cache(static_cast<std::size_t>(hi - lo + 1));
    for (int k = lo; k <= hi; ++k) {
        cache[static_cast<std::size_t>(k - lo)] = empirical_floc(series, k, cfg);
    }
    return assemble([&](int k) { return cache[static_cast<std::size_t>(k - lo)]; }, p, r, false);
}

Eigen::VectorXd solve_guarded(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& rhs,
                              double* condition) {
    if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size()) {
        throw ShapeError("solve_guarded: dimension mismatch");
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(matrix);
    const double rcond = lu.rcond();
    const double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (condition != nullptr) {
        *condition = cond;
    }
    if (!(cond <= kMaxCondition)) {
        throw NumericalError("Yule-Walker matrix is ill-conditioned (condition " +
                                 std::to_string(cond) + ")",
                             cond);
    }
    Eigen::VectorXd x = lu.solve(rhs);
    if (!x.allFinite()) {
        throw NumericalError("Yule-Walker solve produced non-finite values", cond);
    }
    return x;
}

EstimationResult classical_yw(std::span<const double> series, std::size_t p) {
    const auto sys = build_classical_system(series, p, 0);
    EstimationResult res;
    res.method = EstimationMethod::classical_yw;
    res.theta_hat = to_vector(solve_guarded(sys.gamma_matrix, sys.lambda_vector, &res.condition));
    return res;
}

EstimationResult floc_yw(std::span<const double> series, std::size_t p, double b_exp) {
    require_floc_order(p);
    const auto sys = build_floc_system(series, p, 0, b_exp);
    EstimationResult res;
    res.method = EstimationMethod::floc_yw;
    res.theta_hat = to_vector(solve_guarded(sys.gamma_matrix, sys.lambda_vector, &res.condition));
    return res;
}

double eiv_objective(const YwSystem& system, double shift) {
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted(system.gamma_matrix, shift));
    if (!(lu.rcond() > 1.0 / kMaxCondition)) {
        return std::numeric_limits<double>::infinity();
    }
    const Eigen::VectorXd theta = lu.solve(system.lambda_vector);
    return (system.high_gamma * theta - system.high_lambda).squaredNorm();
}

double eiv_gaussian_upper_bound(const YwSystem& sys) {
    const auto p = sys.gamma_matrix.rows();
    Eigen::MatrixXd g(p + 1, p + 1);
    g(0, 0) = sys.lag0;
    g.block(0, 1, 1, p) = sys.lambda_vector.transpose();
    g.block(1, 0, p, 1) = sys.lambda_vector;
    g.block(1, 1, p, p) = sys.gamma_matrix;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

double eiv_stable_upper_bound(const YwSystem& sys, StableEivInterval interval) {
    if (interval == StableEivInterval::symmetrized_min_eig) {
        const Eigen::MatrixXd sym = 0.5 * (sys.gamma_matrix + sys.gamma_matrix.transpose());
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
        const double m = eig.eigenvalues().minCoeff();
        if (m > 0.0) {
            return m;
        }
    }
    return sys.lag0;
}

EstimationResult eiv_gaussian(std::span<const double> series, std::size_t p, std::size_t r,
                              const EivOptions& options) {
    if (r < 1) {
        throw ParameterError("errors-in-variables needs at least one high-order equation");
    }
    const auto sys = build_classical_system(series, p, r);
    const double upper = eiv_gaussian_upper_bound(sys);
    if (!(upper > 0.0)) {
        throw DegenerateDataError("min eig of the extended autocovariance matrix is " +
                                  std::to_string(upper) + "; no admissible noise variance");
    }
    return finish_eiv(sys, 0.0, upper, options, EstimationMethod::eiv_gaussian);
}

EstimationResult eiv_stable(std::span<const double> series, std::size_t p, std::size_t r,
                            double b_bar, const StableEivOptions& options) {
    require_floc_order(p);
    if (r < 1) {
        throw ParameterError("errors-in-variables needs at least one high-order equation");
    }
    const auto sys = build_floc_system(series, p, r, b_bar);
    const double upper = eiv_stable_upper_bound(sys, options.interval);
    if (!(upper > 0.0)) {
        throw DegenerateDataError("no admissible shift interval for the FLOC system (upper bound " +
                                  std::to_string(upper) + ")");
    }
    return finish_eiv(sys, 0.0, upper, options, EstimationMethod::eiv_stable);
}

}  // namespace stabledn
