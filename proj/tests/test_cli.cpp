#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "stabledn/ar_model.hpp"
#include "stabledn/cli.hpp"
#include "stabledn/denoise.hpp"
#include "stabledn/estimators.hpp"

using namespace stabledn;

namespace {

std::filesystem::path temp_dir(const char* name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

int invoke(const std::vector<std::string>& args, std::string* out_text = nullptr) {
    std::ostringstream out, err;
    const int code = run(parse_invocation(args), out, err);
    if (out_text != nullptr) {
        *out_text = out.str();
    }
    return code;
}

std::size_t count_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string l; std::getline(in, l);) {
        ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("parse benchmark with an override") {
    const auto inv = parse_invocation({"benchmark", "--config", "t1.json", "--set", "replicates=20"});
    CHECK(inv.subcommand == "benchmark");
    CHECK(inv.config_path == std::filesystem::path("t1.json"));
    CHECK(inv.overrides == std::vector<std::string>{"replicates=20"});
}

TEST_CASE("parse a file-mode denoise") {
    const auto inv = parse_invocation({"denoise", "--input", "y.csv", "--method", "stable_n2n", "--seed", "7"});
    CHECK(inv.subcommand == "denoise");
    CHECK(inv.input == std::filesystem::path("y.csv"));
    CHECK(inv.method == "stable_n2n");
    CHECK(inv.seed == 7u);
}

TEST_CASE("usage errors") {
    CHECK_THROWS_AS(parse_invocation({}), UsageError);
    CHECK_THROWS_AS(parse_invocation({"frobnicate"}), UsageError);
    CHECK_THROWS_AS(parse_invocation({"benchmark", "--bogus"}), UsageError);
    CHECK_THROWS_AS(parse_invocation({"denoise", "--method", "wdn"}), UsageError);
    try {
        parse_invocation({});
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("benchmark") != std::string::npos);
    }
}

TEST_CASE("help documents every flag of every subcommand") {
    const std::vector<std::pair<std::string, std::vector<std::string>>> expected{
        {"simulate", {"--config", "--set", "--seed", "--out"}},
        {"denoise", {"--input", "--method", "--train-noisy", "--train-pure", "--noise-variance",
                     "--noise-alpha", "--noise-sigma"}},
        {"estimate", {"--input", "--method", "--p", "--B", "--r", "--b-bar"}},
        {"forecast", {"--input", "--noisy", "--eiv", "--p", "--r", "--b-bar"}},
        {"benchmark", {"--config", "--set", "--seed", "--out"}},
    };
    for (const auto& [sub, flags] : expected) {
        std::string text;
        CHECK(invoke({sub, "--help"}, &text) == 0);
        for (const auto& flag : flags) {
            CHECK_MESSAGE(text.find(flag) != std::string::npos, sub, " ", flag);
        }
    }
}

TEST_CASE("unreadable config is a runtime failure") {
    CHECK(invoke({"benchmark", "--config", "/nonexistent/t1.json"}) == 1);
}

TEST_CASE("simulate, estimate and forecast through the command line") {
    const auto dir = temp_dir("stabledn_cli");
    const auto cfg = dir / "t1.json";
    std::ofstream(cfg) << R"({"ar": {"coefficients": [0.5, 0.3], "innovation": {"variance": 1}},
                              "noise": {"variance": 5}})";
    const auto out = dir.string();
    CHECK(invoke({"simulate", "--config", cfg.string(), "--seed", "3", "--out", out}) == 0);
    CHECK(read_series_csv(dir / "pure.csv").size() == 1010);
    CHECK(read_series_csv(dir / "noisy.csv").size() == 1010);

    const NoisyModelSpec spec{{{0.5, 0.3}, StableParams::gaussian(1.0)}, StableParams::gaussian(5.0)};
    const auto ds = simulate_noisy_dataset(spec, 999, 999, kDefaultBurnIn, 3);
    CHECK(read_series_csv(dir / "noisy.csv") == Series(ds.noisy.begin(), ds.noisy.begin() + 1010));

    std::string text;
    CHECK(invoke({"estimate", "--method", "floc_yw", "--input", (dir / "pure.csv").string(), "--p", "2",
                  "--B", "0.45", "--out", out},
                 &text) == 0);
    CHECK(text.find("theta_hat") != std::string::npos);
    CHECK(count_lines(dir / "estimation.csv") == 4);

    CHECK(invoke({"denoise", "--input", (dir / "noisy.csv").string(), "--method", "wdn", "--out", out}) == 0);
    CHECK(invoke({"forecast", "--input", (dir / "denoised.csv").string(), "--eiv", "stable", "--out", out}) == 0);
    CHECK(count_lines(dir / "forecast.csv") == 5);
    CHECK(invoke({"estimate", "--method", "nope", "--input", (dir / "pure.csv").string(), "--out", out}) == 1);
}

TEST_CASE("denoise output equals the library call with the same seed") {
    const auto dir = temp_dir("stabledn_cli_denoise");
    const NoisyModelSpec spec{{{0.5, 0.3}, StableParams::gaussian(1.0)}, StableParams::gaussian(5.0)};
    const auto ds = simulate_noisy_dataset(spec, 300, 0, kDefaultBurnIn, 4);
    write_series_csv(dir / "y.csv", ds.eval_noisy());
    CHECK(invoke({"denoise", "--input", (dir / "y.csv").string(), "--method", "stable_n2n", "--seed", "7",
                  "--set", "train.epochs=2", "--out", dir.string()}) == 0);
    DenoiseConfig cfg;
    cfg.train.epochs = 2;
    cfg.train.seed = 7;
    CHECK(read_series_csv(dir / "denoised.csv") == stable_n2n(read_series_csv(dir / "y.csv"), cfg).denoised);
}

TEST_CASE("benchmark writes both result files") {
    const auto dir = temp_dir("stabledn_cli_bench");
    CHECK(invoke({"benchmark", "--set", "replicates=2", "--set", R"(methods=["wdn"])", "--set",
                  R"(noise_grid=[{"variance":5},{"variance":10}])", "--out", dir.string()}) == 0);
    CHECK(count_lines(dir / "results.csv") == 5);
    CHECK(count_lines(dir / "results_summary.csv") == 3);
}
