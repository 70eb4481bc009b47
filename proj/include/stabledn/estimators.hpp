#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace stabledn {

enum class EstimationMethod { classical_yw, floc_yw, eiv_gaussian, eiv_stable };

std::string_view to_string(EstimationMethod method);

struct EstimationResult {
    std::vector<double> theta_hat;
    /// Noise-variance estimate for eiv_gaussian, diagonal shift for eiv_stable.
    std::optional<double> noise_level;
    EstimationMethod method = EstimationMethod::classical_yw;
    /// Estimated condition number of the final linear solve.
    double condition = 1.0;
};

/// Low- and high-order Yule-Walker matrices.
///
/// Classical:  Gamma(i,j) = g(j-i), lambda(i) = g(i), G_r(i,j) = g(p+i-j), lambda_r(i) = g(p+i)
/// FLOC:       the same with g(k) replaced by the FLOC estimate at lag k, A = 1; because
///             that estimate is not even in k, Gamma(i,j) uses lag i-j.
/// Indices above are 1-based; lag0 holds g(0).
struct YwSystem {
    Eigen::MatrixXd gamma_matrix;
    Eigen::VectorXd lambda_vector;
    Eigen::MatrixXd high_gamma;
    Eigen::VectorXd high_lambda;
    double lag0 = 0.0;
};

/// Maximum accepted condition number of a Yule-Walker solve.
inline constexpr double kMaxCondition = 1e12;

YwSystem build_classical_system(std::span<const double> series, std::size_t p, std::size_t r = 0);
YwSystem build_floc_system(std::span<const double> series, std::size_t p, std::size_t r,
                           double b_exp);

/// Solves matrix * x = rhs by LU with partial pivoting. Throws NumericalError
/// if the estimated condition number exceeds kMaxCondition.
Eigen::VectorXd solve_guarded(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& rhs,
                              double* condition = nullptr);

EstimationResult classical_yw(std::span<const double> series, std::size_t p);

/// FLOC-YW with A = 1. Throws UnsupportedOrderError for p < 2.
EstimationResult floc_yw(std::span<const double> series, std::size_t p, double b_exp);

/// J(s) = || G_r (Gamma - s I)^{-1} lambda - lambda_r ||^2; +inf where the shifted matrix is singular.
double eiv_objective(const YwSystem& system, double shift);

struct EivOptions {
    std::size_t grid_points = 1001;
    double rel_width = 1e-6;
};

/// Errors-in-variables estimate for Gaussian noise: minimizes J over
/// [0, min eig(G)] with G = [[g(0), lambda'], [lambda, Gamma]].
/// Throws DegenerateDataError when min eig(G) <= 0.
EstimationResult eiv_gaussian(std::span<const double> series, std::size_t p, std::size_t r = 2,
                              const EivOptions& options = {});

/// Upper end of the shift search for the FLOC-based variant.
enum class StableEivInterval {
    /// min eig((Gamma + Gamma') / 2), falling back to g(0, B) if that is nonpositive.
    symmetrized_min_eig,
    /// g(0, B) always.
    floc_lag0,
};

struct StableEivOptions : EivOptions {
    StableEivInterval interval = StableEivInterval::symmetrized_min_eig;
};

/// FLOC-based errors-in-variables estimate (A = 1, B = b_bar); the diagonal
/// shift is searched over a nonnegative interval. Throws UnsupportedOrderError for p < 2.
EstimationResult eiv_stable(std::span<const double> series, std::size_t p, std::size_t r,
                            double b_bar, const StableEivOptions& options = {});

/// Upper bound of the search interval used by eiv_gaussian.
double eiv_gaussian_upper_bound(const YwSystem& system);
/// Upper bound of the search interval used by eiv_stable.
double eiv_stable_upper_bound(const YwSystem& system, StableEivInterval interval);

}  // namespace stabledn
