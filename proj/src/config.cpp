#include "stabledn/config.hpp"

#include <fstream>
#include <set>

#include "stabledn/errors.hpp"

namespace stabledn {

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& known, std::string_view where) {
    if (!j.is_object()) {
        throw ParameterError(std::string(where) + " must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw ParameterError("unknown config key '" + std::string(where) + key + "'");
        }
    }
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
    if (!j.contains(key)) {
        return;
    }
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("config key '") + key + "': " + e.what());
    }
}

}  // namespace

StableParams law_from_json(const Json& j) {
    reject_unknown(j, {"variance", "alpha", "sigma", "beta", "mu"}, "law.");
    StableParams law;
    if (j.contains("variance")) {
        if (j.contains("alpha") || j.contains("sigma")) {
            throw ParameterError("a law takes either variance or alpha/sigma, not both");
        }
        law = StableParams::gaussian(j.at("variance").get<double>());
    } else {
        read(j, "alpha", law.alpha);
        read(j, "sigma", law.sigma);
    }
    read(j, "beta", law.beta);
    read(j, "mu", law.mu);
    law.validate();
    return law;
}

Json law_to_json(const StableParams& law) {
    if (law.is_gaussian()) {
        return {{"variance", law.gaussian_variance()}};
    }
    Json j{{"alpha", law.alpha}, {"sigma", law.sigma}};
    if (!law.is_symmetric()) {
        j["beta"] = law.beta;
        j["mu"] = law.mu;
    }
    return j;
}

ExperimentConfig config_from_json(const Json& j) {
    reject_unknown(j,
                   {"ar", "noise", "noise_grid", "n", "n_extra", "burn_in", "replicates", "q",
                    "hidden", "r", "threads", "seed", "methods", "train", "b_prime", "b_bar",
                    "floc_b", "time_limit_s", "blind_range", "estimator", "alignment"},
                   "");
    ExperimentConfig cfg;
    if (j.contains("ar")) {
        const Json& ar = j.at("ar");
        reject_unknown(ar, {"coefficients", "innovation"}, "ar.");
        read(ar, "coefficients", cfg.model.ar.coefficients);
        if (ar.contains("innovation")) {
            cfg.model.ar.innovation = law_from_json(ar.at("innovation"));
        }
    }
    if (j.contains("noise")) {
        cfg.model.noise = law_from_json(j.at("noise"));
    }
    read(j, "n", cfg.n);
    read(j, "n_extra", cfg.n_extra);
    read(j, "burn_in", cfg.burn_in);
    read(j, "replicates", cfg.replicates);
    read(j, "q", cfg.q);
    read(j, "hidden", cfg.hidden);
    read(j, "r", cfg.r);
    read(j, "threads", cfg.threads);
    read(j, "seed", cfg.master_seed);
    read(j, "b_bar", cfg.b_bar);
    read(j, "floc_b", cfg.floc_b);
    read(j, "time_limit_s", cfg.time_limit_s);
    if (j.contains("b_prime") && !j.at("b_prime").is_null()) {
        cfg.b_prime = j.at("b_prime").get<double>();
    }
    if (j.contains("methods")) {
        cfg.methods.clear();
        for (const auto& name : j.at("methods")) {
            cfg.methods.push_back(parse_method(name.get<std::string>()));
        }
    }
    if (j.contains("train")) {
        const Json& t = j.at("train");
        reject_unknown(t,
                       {"epochs", "batch_size", "learning_rate", "weight_decay", "beta1", "beta2",
                        "epsilon", "decay_biases"},
                       "train.");
        read(t, "epochs", cfg.train.epochs);
        read(t, "batch_size", cfg.train.batch_size);
        read(t, "learning_rate", cfg.train.learning_rate);
        read(t, "weight_decay", cfg.train.weight_decay);
        read(t, "beta1", cfg.train.beta1);
        read(t, "beta2", cfg.train.beta2);
        read(t, "epsilon", cfg.train.epsilon);
        read(t, "decay_biases", cfg.train.decay_biases);
    }
    if (j.contains("blind_range")) {
        const Json& b = j.at("blind_range");
        reject_unknown(b, {"alpha_low", "alpha_high", "sigma_low", "sigma_high"}, "blind_range.");
        read(b, "alpha_low", cfg.blind_range.alpha_low);
        read(b, "alpha_high", cfg.blind_range.alpha_high);
        read(b, "sigma_low", cfg.blind_range.sigma_low);
        read(b, "sigma_high", cfg.blind_range.sigma_high);
    }
    if (j.contains("estimator")) {
        cfg.estimator = parse_estimator(j.at("estimator").get<std::string>());
    }
    if (j.contains("alignment")) {
        const auto name = j.at("alignment").get<std::string>();
        if (name == "aligned") {
            cfg.alignment = InferenceAlignment::aligned;
        } else if (name == "shifted") {
            cfg.alignment = InferenceAlignment::shifted;
        } else {
            throw ParameterError("alignment must be aligned or shifted");
        }
    }
    return cfg;
}

Json config_to_json(const ExperimentConfig& cfg) {
    Json methods = Json::array();
    for (auto m : cfg.methods) {
        methods.push_back(std::string(to_string(m)));
    }
    Json j{
        {"ar", {{"coefficients", cfg.model.ar.coefficients},
                {"innovation", law_to_json(cfg.model.ar.innovation)}}},
        {"noise", law_to_json(cfg.model.noise)},
        {"n", cfg.n},
        {"n_extra", cfg.n_extra},
        {"burn_in", cfg.burn_in},
        {"replicates", cfg.replicates},
        {"q", cfg.q},
        {"hidden", cfg.hidden},
        {"r", cfg.r},
        {"threads", cfg.threads},
        {"seed", cfg.master_seed},
        {"methods", methods},
        {"train", {{"epochs", cfg.train.epochs},
                   {"batch_size", cfg.train.batch_size},
                   {"learning_rate", cfg.train.learning_rate},
                   {"weight_decay", cfg.train.weight_decay},
                   {"beta1", cfg.train.beta1},
                   {"beta2", cfg.train.beta2},
                   {"epsilon", cfg.train.epsilon},
                   {"decay_biases", cfg.train.decay_biases}}},
        {"b_bar", cfg.b_bar},
        {"floc_b", cfg.floc_b},
        {"time_limit_s", cfg.time_limit_s},
        {"blind_range", {{"alpha_low", cfg.blind_range.alpha_low},
                         {"alpha_high", cfg.blind_range.alpha_high},
                         {"sigma_low", cfg.blind_range.sigma_low},
                         {"sigma_high", cfg.blind_range.sigma_high}}},
        {"estimator", std::string(to_string(cfg.estimator))},
        {"alignment", cfg.alignment == InferenceAlignment::aligned ? "aligned" : "shifted"},
    };
    j["b_prime"] = cfg.b_prime ? Json(*cfg.b_prime) : Json(nullptr);
    return j;
}

std::vector<ExperimentConfig> expand_noise_grid(const Json& j) {
    const ExperimentConfig base = config_from_json(j);
    if (!j.is_object() || !j.contains("noise_grid")) {
        return {base};
    }
    const Json& grid = j.at("noise_grid");
    if (!grid.is_array() || grid.empty()) {
        throw ParameterError("noise_grid must be a nonempty array of laws");
    }
    std::vector<ExperimentConfig> out;
    for (const auto& law : grid) {
        ExperimentConfig cfg = base;
        cfg.model.noise = law_from_json(law);
        out.push_back(std::move(cfg));
    }
    return out;
}

Json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config " + path.string());
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void apply_override(Json& j, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ParameterError("override '" + std::string(assignment) + "' is not of the form key=value");
    }
    const std::string key(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));
    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) {
        value = text;
    }
    Json* node = &j;
    std::size_t start = 0;
    for (;;) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot - start);
        if (part.empty()) {
            throw ParameterError("override key '" + key + "' has an empty component");
        }
        if (!node->is_object()) {
            *node = Json::object();
        }
        if (dot == std::string::npos) {
            (*node)[part] = std::move(value);
            return;
        }
        node = &(*node)[part];
        start = dot + 1;
    }
}

}  // namespace stabledn
