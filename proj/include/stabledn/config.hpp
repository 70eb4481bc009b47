#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stabledn/harness.hpp"

namespace stabledn {

/// Config documents are JSON objects. Recognized keys (all optional):
///
///   ar.coefficients        array of AR coefficients
///   ar.innovation, noise   a law: {"variance": v} (Gaussian) or {"alpha", "sigma"[, "beta", "mu"]}
///   noise_grid             array of laws; one experiment per entry, overriding "noise"
///   n, n_extra, burn_in, replicates, q, hidden, r, threads, seed
///   methods                array of wdn | nr2n | nac | stable_n2n | n2c
///   train.{epochs, batch_size, learning_rate, weight_decay, beta1, beta2, epsilon, decay_biases}
///   b_prime, b_bar, floc_b, time_limit_s
///   blind_range.{alpha_low, alpha_high, sigma_low, sigma_high}
///   estimator              classical | floc
///   alignment              aligned | shifted
///
/// Unknown keys are rejected with ParameterError.
using Json = nlohmann::json;

StableParams law_from_json(const Json& j);
Json law_to_json(const StableParams& law);

/// Reads every key of `j` over the defaults; "noise_grid" is ignored here.
ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& cfg);

/// One config per "noise_grid" entry, or a single config when the key is absent.
std::vector<ExperimentConfig> expand_noise_grid(const Json& j);

/// Throws IoError when the file cannot be read or parsed.
Json load_json(const std::filesystem::path& path);

/// Applies "a.b.c=value". The value is parsed as JSON when possible, else taken as a string.
void apply_override(Json& j, std::string_view assignment);

}  // namespace stabledn
