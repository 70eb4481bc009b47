#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace stabledn {

/// Bad command line; the message holds the usage text. Maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CliInvocation {
    std::string subcommand;
    std::optional<std::filesystem::path> config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::filesystem::path out_dir = ".";
    /// Set when --help was requested; run() prints it and exits 0.
    std::optional<std::string> help;

    // denoise, estimate, forecast
    std::optional<std::filesystem::path> input;
    std::string method;
    // denoise
    std::optional<std::filesystem::path> train_noisy;
    std::optional<std::filesystem::path> train_pure;
    std::optional<double> noise_variance;
    std::optional<double> noise_alpha;
    std::optional<double> noise_sigma;
    // estimate, forecast
    std::size_t p = 2;
    double floc_b = 0.45;
    std::size_t r = 2;
    double b_bar = 0.45;
    // forecast
    std::optional<std::filesystem::path> noisy;
    std::string eiv = "gaussian";
};

/// args excludes the program name. Throws UsageError.
CliInvocation parse_invocation(const std::vector<std::string>& args);

/// Returns 0 on success and 1 on runtime or I/O failure; messages go to `err`.
int run(const CliInvocation& invocation, std::ostream& out, std::ostream& err);

/// parse_invocation + run, mapping usage errors to exit code 2.
int cli_main(int argc, char** argv);

}  // namespace stabledn
