#include "stabledn/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "stabledn/config.hpp"
#include "stabledn/errors.hpp"
#include "stabledn/estimators.hpp"

namespace stabledn {

namespace {

struct Parser {
    CLI::App app{"Denoising and estimation for AR processes with heavy-tailed noise", "stable_denoise"};
    CliInvocation inv;
    std::string input, train_noisy, train_pure, noisy, config, out_dir = ".";

    void common(CLI::App* sub) {
        sub->add_option("--config", config, "JSON config file (see README for keys)");
        sub->add_option("--set", inv.overrides, "Dotted-path override key=value, applied after --config")
            ->take_all();
        sub->add_option("--seed", inv.seed, "Master seed (benchmark, simulate) or training seed (denoise)");
        sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    }

    Parser() {
        app.require_subcommand(1);
        app.fallthrough(false);

        auto* simulate = app.add_subcommand(
            "simulate", "Simulate a noisy AR trajectory; writes pure.csv and noisy.csv (n + 11 samples)");
        common(simulate);

        auto* denoise = app.add_subcommand("denoise", "Denoise a series; writes denoised.csv");
        common(denoise);
        denoise->add_option("--input", input, "Noisy series CSV")->required();
        denoise->add_option("--method", inv.method, "wdn | nr2n | nac | stable_n2n | n2c")->required();
        denoise->add_option("--train-noisy", train_noisy, "Extra noisy series (nr2n, n2c)");
        denoise->add_option("--train-pure", train_pure, "Extra clean series aligned with --train-noisy (n2c)");
        denoise->add_option("--noise-variance", inv.noise_variance,
                            "Gaussian law of the simulated corruption (nac, nr2n)");
        denoise->add_option("--noise-alpha", inv.noise_alpha,
                            "Stability index of the simulated corruption (nac, nr2n)");
        denoise->add_option("--noise-sigma", inv.noise_sigma,
                            "Scale of the simulated corruption (nac, nr2n)");

        auto* estimate = app.add_subcommand("estimate", "Estimate AR coefficients; writes estimation.csv");
        common(estimate);
        estimate->add_option("--input", input, "Series CSV")->required();
        estimate->add_option("--method", inv.method, "classical_yw | floc_yw | eiv_gaussian | eiv_stable")
            ->required();
        estimate->add_option("--p", inv.p, "AR order")->capture_default_str();
        estimate->add_option("--B", inv.floc_b, "FLOC exponent for floc_yw")->capture_default_str();
        estimate->add_option("--r", inv.r, "Extra Yule-Walker lags for the EIV methods")->capture_default_str();
        estimate->add_option("--b-bar", inv.b_bar, "FLOC exponent for eiv_stable")->capture_default_str();

        auto* fc = app.add_subcommand("forecast", "Five-step forecast; writes forecast.csv");
        common(fc);
        fc->add_option("--input", input, "Denoised series CSV; its last p values start the recursion")
            ->required();
        fc->add_option("--noisy", noisy, "Series the EIV coefficients are fitted on (default: --input)");
        fc->add_option("--eiv", inv.eiv, "gaussian | stable")->capture_default_str();
        fc->add_option("--p", inv.p, "AR order")->capture_default_str();
        fc->add_option("--r", inv.r, "Extra Yule-Walker lags")->capture_default_str();
        fc->add_option("--b-bar", inv.b_bar, "FLOC exponent for the stable EIV")->capture_default_str();

        auto* bench = app.add_subcommand(
            "benchmark", "Monte Carlo comparison; writes results.csv and results_summary.csv");
        common(bench);
    }
};

std::optional<std::filesystem::path> as_path(const std::string& s) {
    if (s.empty()) {
        return std::nullopt;
    }
    return std::filesystem::path(s);
}

Json load_config(const CliInvocation& inv) {
    Json j = inv.config_path ? load_json(*inv.config_path) : Json::object();
    for (const auto& o : inv.overrides) {
        apply_override(j, o);
    }
    if (inv.seed) {
        j["seed"] = *inv.seed;
    }
    return j;
}

void apply_thread_env(ExperimentConfig& cfg) {
    if (const char* env = std::getenv("STABLE_DENOISE_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (*end != '\0') {
            throw ParameterError("STABLE_DENOISE_THREADS must be a nonnegative integer");
        }
        cfg.threads = static_cast<std::size_t>(v);
    }
}

std::filesystem::path prepare_out(const CliInvocation& inv) {
    std::error_code ec;
    std::filesystem::create_directories(inv.out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + inv.out_dir.string() + ": " + ec.message());
    }
    return inv.out_dir;
}

void print_values(std::ostream& out, std::string_view label, std::span<const double> v) {
    out << label << ':';
    for (double x : v) {
        out << ' ' << std::setprecision(6) << x;
    }
    out << '\n';
}

std::optional<StableParams> simulated_noise_from(const CliInvocation& inv) {
    if (inv.noise_variance) {
        if (inv.noise_alpha || inv.noise_sigma) {
            throw ParameterError("give either --noise-variance or --noise-alpha/--noise-sigma");
        }
        return StableParams::gaussian(*inv.noise_variance);
    }
    if (inv.noise_alpha || inv.noise_sigma) {
        if (!inv.noise_alpha || !inv.noise_sigma) {
            throw ParameterError("--noise-alpha and --noise-sigma must be given together");
        }
        StableParams law = StableParams::symmetric(*inv.noise_alpha, *inv.noise_sigma);
        law.validate();
        return law;
    }
    return std::nullopt;
}

int run_simulate(const CliInvocation& inv, std::ostream& out) {
    const ExperimentConfig cfg = config_from_json(load_config(inv));
    cfg.model.validate();
    const NoisyDataset ds =
        simulate_noisy_dataset(cfg.model, cfg.n, cfg.n_extra, cfg.burn_in, cfg.master_seed);
    const auto dir = prepare_out(inv);
    const std::size_t head = cfg.n + kForecastMargin;
    write_series_csv(dir / "pure.csv", std::span<const double>(ds.pure.data(), head));
    write_series_csv(dir / "noisy.csv", std::span<const double>(ds.noisy.data(), head));
    if (cfg.n_extra > 0) {
        write_series_csv(dir / "extra_pure.csv", ds.extra_pure());
        write_series_csv(dir / "extra_noisy.csv", ds.extra_noisy());
    }
    out << "wrote " << head << " samples to " << (dir / "pure.csv").string() << " and "
        << (dir / "noisy.csv").string() << '\n';
    return 0;
}

int run_denoise(const CliInvocation& inv, std::ostream& out) {
    const ExperimentConfig cfg = config_from_json(load_config(inv));
    const DenoiseMethod method = parse_method(inv.method);
    const Series noisy = read_series_csv(*inv.input);

    DenoiseConfig dcfg;
    dcfg.q = cfg.q;
    dcfg.hidden = cfg.hidden;
    dcfg.b_prime = cfg.effective_b_prime();
    dcfg.train = cfg.train;
    dcfg.train.seed = cfg.master_seed;
    dcfg.alignment = cfg.alignment;

    auto need = [](const std::optional<std::filesystem::path>& p, const char* flag) {
        if (!p) {
            throw ParameterError(std::string("this method needs ") + flag);
        }
        return read_series_csv(*p);
    };
    auto noise_law = [&] {
        if (auto law = simulated_noise_from(inv)) {
            return *law;
        }
        if (cfg.model.is_gaussian()) {
            const auto eiv = eiv_gaussian(noisy, cfg.model.ar.order(), cfg.r);
            return StableParams::gaussian(*eiv.noise_level);
        }
        Rng blind(derive_seed(cfg.master_seed, "blind"));
        return cfg.blind_range.draw(blind);
    };

    Series denoised;
    switch (method) {
        case DenoiseMethod::wdn: denoised = wdn(noisy); break;
        case DenoiseMethod::stable_n2n: denoised = stable_n2n(noisy, dcfg).denoised; break;
        case DenoiseMethod::nac: denoised = nac(noisy, noise_law(), dcfg).denoised; break;
        case DenoiseMethod::nr2n: {
            const Series extra = need(inv.train_noisy, "--train-noisy");
            denoised = nr2n(noisy, extra, noise_law(), dcfg).denoised;
            break;
        }
        case DenoiseMethod::n2c: {
            const Series extra_noisy = need(inv.train_noisy, "--train-noisy");
            const Series extra_pure = need(inv.train_pure, "--train-pure");
            denoised = n2c(noisy, extra_noisy, extra_pure, dcfg).denoised;
            break;
        }
    }
    const auto path = prepare_out(inv) / "denoised.csv";
    write_series_csv(path, denoised);
    out << "wrote " << denoised.size() << " samples to " << path.string() << '\n';
    return 0;
}

int run_estimate(const CliInvocation& inv, std::ostream& out) {
    const Series series = read_series_csv(*inv.input);
    EstimationResult est;
    if (inv.method == "classical_yw") {
        est = classical_yw(series, inv.p);
    } else if (inv.method == "floc_yw") {
        est = floc_yw(series, inv.p, inv.floc_b);
    } else if (inv.method == "eiv_gaussian") {
        est = eiv_gaussian(series, inv.p, inv.r);
    } else if (inv.method == "eiv_stable") {
        est = eiv_stable(series, inv.p, inv.r, inv.b_bar);
    } else {
        throw ParameterError("unknown estimation method '" + inv.method + "'");
    }
    print_values(out, "theta_hat", est.theta_hat);
    if (est.noise_level) {
        out << "noise_level: " << *est.noise_level << '\n';
    }

    const auto path = prepare_out(inv) / "estimation.csv";
    std::ofstream f(path);
    if (!f) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    f << std::setprecision(17) << "name,value\n";
    for (std::size_t i = 0; i < est.theta_hat.size(); ++i) {
        f << "theta_" << i + 1 << ',' << est.theta_hat[i] << '\n';
    }
    if (est.noise_level) {
        f << "noise_level," << *est.noise_level << '\n';
    }
    f << "condition," << est.condition << '\n';
    if (!f) {
        throw IoError("write failed for " + path.string());
    }
    return 0;
}

int run_forecast(const CliInvocation& inv, std::ostream& out) {
    const Series denoised = read_series_csv(*inv.input);
    const Series noisy = inv.noisy ? read_series_csv(*inv.noisy) : denoised;
    EstimationResult eiv;
    if (inv.eiv == "gaussian") {
        eiv = eiv_gaussian(noisy, inv.p, inv.r);
    } else if (inv.eiv == "stable") {
        eiv = eiv_stable(noisy, inv.p, inv.r, inv.b_bar);
    } else {
        throw ParameterError("--eiv must be gaussian or stable");
    }
    if (denoised.size() < inv.p) {
        throw DomainError("input has fewer than p samples");
    }
    const std::span<const double> tail(denoised.data() + denoised.size() - inv.p, inv.p);
    const auto values = forecast(tail, eiv.theta_hat, kForecastHorizon);

    const auto path = prepare_out(inv) / "forecast.csv";
    std::ofstream f(path);
    if (!f) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    f << std::setprecision(17);
    for (double v : values) {
        f << v << '\n';
    }
    if (!f) {
        throw IoError("write failed for " + path.string());
    }
    print_values(out, "forecast", values);
    return 0;
}

int run_benchmark(const CliInvocation& inv, std::ostream& out) {
    auto configs = expand_noise_grid(load_config(inv));
    ResultTable table;
    for (auto& cfg : configs) {
        apply_thread_env(cfg);
        table.append(run_experiment(cfg));
    }
    const auto path = prepare_out(inv) / "results.csv";
    write_results(table, path);
    for (const auto& row : table.rows) {
        out << "noise_alpha=" << row.noise_alpha << " scale=" << row.noise_scale << ' ' << row.method
            << " param_mae=" << row.mean_param_mae << " forecast_mae=" << row.mean_forecast_mae
            << " excluded=" << row.param_excluded << '\n';
    }
    out << "wrote " << path.string() << " and " << summary_path_for(path).string() << '\n';
    return 0;
}

}  // namespace

CliInvocation parse_invocation(const std::vector<std::string>& args) {
    Parser parser;
    if (args.empty()) {
        throw UsageError(parser.app.help());
    }
    try {
        parser.app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp&) {
        CliInvocation inv;
        inv.help = parser.app.help();
        for (const auto* sub : parser.app.get_subcommands()) {
            inv.subcommand = sub->get_name();
            inv.help = sub->help();
        }
        return inv;
    } catch (const CLI::ParseError& e) {
        throw UsageError(std::string(e.what()) + "\nRun with --help for more information.");
    }
    CliInvocation inv = std::move(parser.inv);
    inv.subcommand = parser.app.get_subcommands().front()->get_name();
    inv.config_path = as_path(parser.config);
    inv.input = as_path(parser.input);
    inv.train_noisy = as_path(parser.train_noisy);
    inv.train_pure = as_path(parser.train_pure);
    inv.noisy = as_path(parser.noisy);
    inv.out_dir = parser.out_dir;
    return inv;
}

int run(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
    if (inv.help) {
        out << *inv.help;
        return 0;
    }
    try {
        if (inv.subcommand == "simulate") {
            return run_simulate(inv, out);
        }
        if (inv.subcommand == "denoise") {
            return run_denoise(inv, out);
        }
        if (inv.subcommand == "estimate") {
            return run_estimate(inv, out);
        }
        if (inv.subcommand == "forecast") {
            return run_forecast(inv, out);
        }
        if (inv.subcommand == "benchmark") {
            return run_benchmark(inv, out);
        }
        err << "unknown subcommand '" << inv.subcommand << "'\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    CliInvocation inv;
    try {
        inv = parse_invocation(args);
    } catch (const UsageError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    return run(inv, std::cout, std::cerr);
}

}  // namespace stabledn
