#include "stabledn/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "stabledn/errors.hpp"
#include "stabledn/estimators.hpp"

namespace stabledn {

std::string_view to_string(DenoiseMethod method) {
    switch (method) {
        case DenoiseMethod::wdn: return "wdn";
        case DenoiseMethod::nr2n: return "nr2n";
        case DenoiseMethod::nac: return "nac";
        case DenoiseMethod::stable_n2n: return "stable_n2n";
        case DenoiseMethod::n2c: return "n2c";
    }
    return "unknown";
}

DenoiseMethod parse_method(std::string_view name) {
    for (auto m : kAllMethods) {
        if (to_string(m) == name) {
            return m;
        }
    }
    throw ParameterError("unknown denoising method '" + std::string(name) +
                         "' (expected wdn, nr2n, nac, stable_n2n or n2c)");
}

std::string_view to_string(EstimatorKind kind) {
    return kind == EstimatorKind::classical ? "classical" : "floc";
}

EstimatorKind parse_estimator(std::string_view name) {
    if (name == "classical") {
        return EstimatorKind::classical;
    }
    if (name == "floc") {
        return EstimatorKind::floc;
    }
    throw ParameterError("unknown estimator '" + std::string(name) + "' (expected classical or floc)");
}

double ExperimentConfig::effective_b_prime() const {
    if (b_prime) {
        return *b_prime;
    }
    return model.is_gaussian() ? 1.0 : 0.45;
}

void ExperimentConfig::validate() const {
    model.validate();
    train.validate();
    blind_range.validate();
    if (replicates == 0) {
        throw ParameterError("replicates must be positive");
    }
    if (methods.empty()) {
        throw ParameterError("at least one method is required");
    }
    if (q == 0 || hidden == 0) {
        throw ParameterError("q and hidden must be positive");
    }
    if (n < 2 * q + 1 || n <= model.ar.order() + r + 1) {
        throw ParameterError("n is too small for the window length and Yule-Walker lags");
    }
    if (r == 0) {
        throw ParameterError("r must be positive");
    }
    const double bp = effective_b_prime();
    if (!(bp > 0.0) || !(b_bar > 0.0) || !(floc_b >= 0.0)) {
        throw ParameterError("b_prime and b_bar must be positive, floc_b nonnegative");
    }
    if (estimator == EstimatorKind::classical && !model.ar.innovation.is_gaussian()) {
        throw ParameterError("the classical estimator requires Gaussian innovations (alpha = 2)");
    }
    if (!model.is_gaussian() && model.ar.order() < 2) {
        throw ParameterError("FLOC-based forecasting requires AR order >= 2");
    }
    if (estimator == EstimatorKind::floc && model.ar.order() < 2) {
        throw ParameterError("FLOC-YW requires AR order >= 2");
    }
    for (auto m : methods) {
        if ((m == DenoiseMethod::nr2n || m == DenoiseMethod::n2c) && n_extra < 2 * q) {
            throw ParameterError("dataset-based methods need n_extra >= 2q extra samples");
        }
    }
    if (!(time_limit_s >= 0.0)) {
        throw ParameterError("time_limit_s must be nonnegative");
    }
}

void ResultRow::aggregate() {
    double param_sum = 0.0;
    double forecast_sum = 0.0;
    std::size_t param_count = 0;
    std::size_t forecast_count = 0;
    for (const auto& t : trajectories) {
        if (t.param_ok()) {
            param_sum += t.param_mae;
            ++param_count;
        }
        if (t.forecast_ok()) {
            forecast_sum += t.forecast_mae;
            ++forecast_count;
        }
    }
    const double nan = std::nan("");
    mean_param_mae = param_count > 0 ? param_sum / static_cast<double>(param_count) : nan;
    mean_forecast_mae = forecast_count > 0 ? forecast_sum / static_cast<double>(forecast_count) : nan;
    param_excluded = trajectories.size() - param_count;
    forecast_excluded = trajectories.size() - forecast_count;
}

const ResultRow* ResultTable::find(std::string_view method) const {
    for (const auto& row : rows) {
        if (row.method == method) {
            return &row;
        }
    }
    return nullptr;
}

void ResultTable::append(const ResultTable& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

namespace {

bool same_number(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

double noise_scale(const StableParams& noise) {
    return noise.alpha == 2.0 ? noise.gaussian_variance() : noise.sigma;
}

}  // namespace

bool same_results(const ResultTable& a, const ResultTable& b, bool compare_wall_time) {
    if (a.rows.size() != b.rows.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const auto& x = a.rows[i];
        const auto& y = b.rows[i];
        if (!same_number(x.noise_alpha, y.noise_alpha) || !same_number(x.noise_scale, y.noise_scale) ||
            x.method != y.method || !same_number(x.mean_param_mae, y.mean_param_mae) ||
            !same_number(x.mean_forecast_mae, y.mean_forecast_mae) ||
            x.param_excluded != y.param_excluded || x.forecast_excluded != y.forecast_excluded ||
            x.trajectories.size() != y.trajectories.size()) {
            return false;
        }
        if (compare_wall_time && !same_number(x.wall_time_s, y.wall_time_s)) {
            return false;
        }
        for (std::size_t j = 0; j < x.trajectories.size(); ++j) {
            const auto& s = x.trajectories[j];
            const auto& t = y.trajectories[j];
            if (s.replicate != t.replicate || s.flags != t.flags ||
                !same_number(s.param_mae, t.param_mae) || !same_number(s.forecast_mae, t.forecast_mae)) {
                return false;
            }
        }
    }
    return true;
}

std::vector<TrajectoryResult> run_replicate(const ExperimentConfig& cfg, std::size_t replicate,
                                            std::vector<double>* method_seconds) {
    using clock = std::chrono::steady_clock;
    const auto started = clock::now();
    const std::uint64_t seed = derive_seed(cfg.master_seed, replicate);
    const NoisyDataset ds =
        simulate_noisy_dataset(cfg.model, cfg.n, cfg.n_extra, cfg.burn_in, derive_seed(seed, "data"));
    const auto& theta = cfg.model.ar.coefficients;
    const std::size_t p = theta.size();
    const bool gaussian = cfg.model.is_gaussian();
    const auto noisy = ds.eval_noisy();

    // Forecast coefficients come from an errors-in-variables fit on the noisy series,
    // shared by every method.
    std::optional<EstimationResult> eiv;
    try {
        eiv = gaussian ? eiv_gaussian(noisy, p, cfg.r)
                       : eiv_stable(noisy, p, cfg.r, cfg.b_bar);
    } catch (const std::exception&) {
        eiv.reset();
    }

    // Law of the extra corruption used by NAC and NR2N.
    std::optional<StableParams> simulated_noise;
    if (gaussian) {
        if (eiv && eiv->noise_level && *eiv->noise_level > 0.0) {
            simulated_noise = StableParams::gaussian(*eiv->noise_level);
        }
    } else {
        Rng blind(derive_seed(seed, "blind"));
        simulated_noise = cfg.blind_range.draw(blind);
    }

    DenoiseConfig dcfg;
    dcfg.q = cfg.q;
    dcfg.hidden = cfg.hidden;
    dcfg.b_prime = cfg.effective_b_prime();
    dcfg.train = cfg.train;
    dcfg.alignment = cfg.alignment;

    std::vector<TrajectoryResult> results;
    if (method_seconds != nullptr) {
        method_seconds->assign(cfg.methods.size(), 0.0);
    }
    for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
        const DenoiseMethod method = cfg.methods[k];
        const auto method_started = clock::now();
        TrajectoryResult res;
        res.method = std::string(to_string(method));
        res.replicate = replicate;
        dcfg.train.seed = derive_seed(seed, to_string(method));

        const bool needs_noise = method == DenoiseMethod::nac || method == DenoiseMethod::nr2n;
        const double elapsed = std::chrono::duration<double>(method_started - started).count();
        Series denoised;
        if (cfg.time_limit_s > 0.0 && elapsed > cfg.time_limit_s) {
            res.flags |= kFlagTimeLimit;
        } else if (needs_noise && !simulated_noise) {
            res.flags |= kFlagNoiseEstimateFailed;
        } else {
            try {
                switch (method) {
                    case DenoiseMethod::wdn: denoised = wdn(noisy); break;
                    case DenoiseMethod::stable_n2n: denoised = stable_n2n(noisy, dcfg).denoised; break;
                    case DenoiseMethod::nac: denoised = nac(noisy, *simulated_noise, dcfg).denoised; break;
                    case DenoiseMethod::nr2n:
                        denoised = nr2n(noisy, ds.extra_noisy(), *simulated_noise, dcfg).denoised;
                        break;
                    case DenoiseMethod::n2c:
                        denoised = n2c(noisy, ds.extra_noisy(), ds.extra_pure(), dcfg).denoised;
                        break;
                }
            } catch (const std::exception&) {
                res.flags |= kFlagDenoiseFailed;
            }
        }

        if (res.flags == kFlagNone) {
            try {
                const auto est = cfg.estimator == EstimatorKind::classical
                                     ? classical_yw(denoised, p)
                                     : floc_yw(denoised, p, cfg.floc_b);
                res.theta_hat = est.theta_hat;
                res.param_mae = param_mae(theta, est.theta_hat);
            } catch (const std::exception&) {
                res.flags |= kFlagEstimationFailed;
            }
        }
        if (!res.param_ok()) {
            res.param_mae = std::nan("");
            res.forecast_mae = std::nan("");
        } else if (!eiv) {
            res.flags |= kFlagForecastFailed;
            res.forecast_mae = std::nan("");
        } else {
            const std::span<const double> tail(denoised.data() + denoised.size() - p, p);
            res.forecast = forecast(tail, eiv->theta_hat, kForecastHorizon);
            res.forecast_mae = forecast_mae(res.forecast, ds.forecast_truth().first(kForecastHorizon));
        }
        if (method_seconds != nullptr) {
            (*method_seconds)[k] =
                std::chrono::duration<double>(clock::now() - method_started).count();
        }
        results.push_back(std::move(res));
    }
    return results;
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::size_t m_total = cfg.replicates;
    std::vector<std::vector<TrajectoryResult>> per_replicate(m_total);
    std::vector<std::vector<double>> per_seconds(m_total);

    std::size_t workers = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
    workers = std::max<std::size_t>(1, std::min(workers, m_total));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t m = next.fetch_add(1);
            if (m >= m_total) {
                return;
            }
            try {
                per_replicate[m] = run_replicate(cfg, m, &per_seconds[m]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(m_total);
                return;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    ResultTable table;
    for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
        ResultRow row;
        row.noise_alpha = cfg.model.noise.alpha;
        row.noise_scale = noise_scale(cfg.model.noise);
        row.method = std::string(to_string(cfg.methods[k]));
        for (std::size_t m = 0; m < m_total; ++m) {
            row.trajectories.push_back(per_replicate[m][k]);
            row.wall_time_s += per_seconds[m][k];
        }
        row.aggregate();
        table.rows.push_back(std::move(row));
    }
    return table;
}

namespace {

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

constexpr const char* kDetailHeader =
    "noise_alpha,noise_sigma_or_var,method,replicate,param_mae,forecast_mae,flag";
constexpr const char* kSummaryHeader =
    "noise_alpha,noise_sigma_or_var,method,replicates,mean_param_mae,mean_forecast_mae,"
    "param_excluded,forecast_excluded,wall_time_s";

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

double parse_double(const std::string& text, const std::filesystem::path& path) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) {
        throw IoError(path.string() + ": bad number '" + text + "'");
    }
    return v;
}

std::size_t parse_count(const std::string& text, const std::filesystem::path& path) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(text, &used);
        if (used == text.size()) {
            return static_cast<std::size_t>(v);
        }
    } catch (const std::exception&) {
    }
    throw IoError(path.string() + ": bad integer '" + text + "'");
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               std::string_view header, std::size_t columns) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != header) {
        throw IoError(path.string() + ": unexpected header");
    }
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto fields = split_csv(line);
        if (fields.size() != columns) {
            throw IoError(path.string() + ": expected " + std::to_string(columns) + " fields in '" +
                          line + "'");
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace

std::filesystem::path summary_path_for(const std::filesystem::path& detail_path) {
    auto out = detail_path;
    out.replace_filename(detail_path.stem().string() + "_summary" + detail_path.extension().string());
    return out;
}

void write_results(const ResultTable& table, const std::filesystem::path& path) {
    const auto summary_path = summary_path_for(path);
    std::ofstream detail(path);
    if (!detail) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    std::ofstream summary(summary_path);
    if (!summary) {
        throw IoError("cannot open " + summary_path.string() + " for writing");
    }
    detail << kDetailHeader << '\n';
    summary << kSummaryHeader << '\n';
    for (const auto& row : table.rows) {
        const std::string prefix =
            format_number(row.noise_alpha) + ',' + format_number(row.noise_scale) + ',' + row.method;
        for (const auto& t : row.trajectories) {
            detail << prefix << ',' << t.replicate << ',' << format_number(t.param_mae) << ','
                   << format_number(t.forecast_mae) << ',' << t.flags << '\n';
        }
        summary << prefix << ',' << row.trajectories.size() << ','
                << format_number(row.mean_param_mae) << ',' << format_number(row.mean_forecast_mae)
                << ',' << row.param_excluded << ',' << row.forecast_excluded << ','
                << format_number(row.wall_time_s) << '\n';
    }
    if (!detail || !summary) {
        throw IoError("write failed for " + path.string());
    }
}

ResultTable read_results(const std::filesystem::path& detail_path,
                         const std::filesystem::path& summary_path) {
    const auto summary = read_csv(summary_path, kSummaryHeader, 9);
    const auto detail = read_csv(detail_path, kDetailHeader, 7);

    ResultTable table;
    for (const auto& f : summary) {
        ResultRow row;
        row.noise_alpha = parse_double(f[0], summary_path);
        row.noise_scale = parse_double(f[1], summary_path);
        row.method = f[2];
        row.mean_param_mae = parse_double(f[4], summary_path);
        row.mean_forecast_mae = parse_double(f[5], summary_path);
        row.param_excluded = parse_count(f[6], summary_path);
        row.forecast_excluded = parse_count(f[7], summary_path);
        row.wall_time_s = parse_double(f[8], summary_path);
        row.trajectories.reserve(parse_count(f[3], summary_path));
        table.rows.push_back(std::move(row));
    }

    // Detail rows are attached to the summary row that matches their key, in file order.
    std::size_t cursor = 0;
    for (const auto& f : detail) {
        const double alpha = parse_double(f[0], detail_path);
        const double scale = parse_double(f[1], detail_path);
        while (cursor < table.rows.size() &&
               (table.rows[cursor].method != f[2] || !same_number(table.rows[cursor].noise_alpha, alpha) ||
                !same_number(table.rows[cursor].noise_scale, scale) ||
                table.rows[cursor].trajectories.size() == table.rows[cursor].trajectories.capacity())) {
            ++cursor;
        }
        if (cursor == table.rows.size()) {
            throw IoError(detail_path.string() + ": detail row without a matching summary row");
        }
        TrajectoryResult t;
        t.method = f[2];
        t.replicate = parse_count(f[3], detail_path);
        t.param_mae = parse_double(f[4], detail_path);
        t.forecast_mae = parse_double(f[5], detail_path);
        t.flags = static_cast<std::uint32_t>(parse_count(f[6], detail_path));
        table.rows[cursor].trajectories.push_back(std::move(t));
    }
    return table;
}

}  // namespace stabledn
