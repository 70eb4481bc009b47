#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stabledn/ar_model.hpp"
#include "stabledn/denoise.hpp"
#include "stabledn/evaluate.hpp"
#include "stabledn/mlp.hpp"

namespace stabledn {

enum class DenoiseMethod { wdn, nr2n, nac, stable_n2n, n2c };

inline constexpr DenoiseMethod kAllMethods[] = {DenoiseMethod::wdn, DenoiseMethod::nr2n,
                                                DenoiseMethod::nac, DenoiseMethod::stable_n2n,
                                                DenoiseMethod::n2c};

std::string_view to_string(DenoiseMethod method);
/// Throws ParameterError for an unknown name.
DenoiseMethod parse_method(std::string_view name);

/// Estimator applied to every denoised series.
enum class EstimatorKind { classical, floc };

std::string_view to_string(EstimatorKind kind);
EstimatorKind parse_estimator(std::string_view name);

struct ExperimentConfig {
    NoisyModelSpec model{{{0.5, 0.3}, StableParams::gaussian(1.0)}, StableParams::gaussian(5.0)};
    std::size_t n = 999;
    std::size_t n_extra = 999;
    std::size_t burn_in = kDefaultBurnIn;
    std::vector<DenoiseMethod> methods{std::begin(kAllMethods), std::end(kAllMethods)};
    std::size_t replicates = 1000;
    TrainConfig train;
    std::size_t q = 10;
    std::size_t hidden = 22;
    /// Stable-N2N input exponent; unset means 1 for an all-Gaussian model and 0.45 otherwise.
    std::optional<double> b_prime;
    /// FLOC exponent of the errors-in-variables fit used for forecasting.
    double b_bar = 0.45;
    std::size_t r = 2;
    BlindNoiseRange blind_range;
    std::uint64_t master_seed = 1;
    EstimatorKind estimator = EstimatorKind::classical;
    /// B of the FLOC-YW estimator (A = 1).
    double floc_b = 0.45;
    InferenceAlignment alignment = InferenceAlignment::aligned;
    /// Worker threads; 0 means all available cores.
    std::size_t threads = 0;
    /// Seconds per trajectory after which remaining methods are skipped; 0 disables.
    double time_limit_s = 0.0;

    double effective_b_prime() const;
    /// Throws ParameterError (or ModelError) when a field is out of its domain.
    void validate() const;
};

struct ResultRow {
    double noise_alpha = 2.0;
    /// Variance for Gaussian noise, sigma otherwise.
    double noise_scale = 0.0;
    std::string method;
    std::vector<TrajectoryResult> trajectories;
    double mean_param_mae = 0.0;
    double mean_forecast_mae = 0.0;
    std::size_t param_excluded = 0;
    std::size_t forecast_excluded = 0;
    double wall_time_s = 0.0;

    /// Recomputes the means and exclusion counts from `trajectories`.
    void aggregate();
};

struct ResultTable {
    std::vector<ResultRow> rows;

    const ResultRow* find(std::string_view method) const;
    void append(const ResultTable& other);
};

/// Element-wise comparison of everything the CSV files carry (NaN equals NaN).
bool same_results(const ResultTable& a, const ResultTable& b, bool compare_wall_time = true);

/// Runs every requested method on `replicates` independent trajectories of cfg.model.
ResultTable run_experiment(const ExperimentConfig& cfg);

/// Runs one replicate; exposed so tests can inspect single trajectories.
std::vector<TrajectoryResult> run_replicate(const ExperimentConfig& cfg, std::size_t replicate,
                                            std::vector<double>* method_seconds = nullptr);

/// `results.csv` -> `results_summary.csv`.
std::filesystem::path summary_path_for(const std::filesystem::path& detail_path);

/// Writes the per-trajectory detail CSV at `path` and the per-row summary CSV next to it.
/// Output is byte-identical for identical tables.
void write_results(const ResultTable& table, const std::filesystem::path& path);

/// Parses the detail and summary files produced by write_results.
ResultTable read_results(const std::filesystem::path& detail_path,
                         const std::filesystem::path& summary_path);

}  // namespace stabledn
