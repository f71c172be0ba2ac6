#include "rankdyn/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rankdyn {
namespace {

using nlohmann::json;

constexpr double kSumTolerance = 1e-12;

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

void require_known_keys(const json& object, const std::set<std::string>& allowed,
                        std::string_view where) {
    for (const auto& [key, value] : object.items()) {
        if (!allowed.contains(key)) {
            fail("unknown key '" + key + "' in " + std::string(where));
        }
    }
}

double get_real(const json& object, const char* key, double fallback) {
    if (!object.contains(key)) return fallback;
    const json& value = object.at(key);
    if (!value.is_number()) fail(std::string("'") + key + "' must be a number");
    return value.get<double>();
}

int get_int(const json& object, const char* key, int fallback) {
    if (!object.contains(key)) return fallback;
    const json& value = object.at(key);
    if (!value.is_number_integer()) fail(std::string("'") + key + "' must be an integer");
    const auto wide = value.get<std::int64_t>();
    if (wide < std::numeric_limits<int>::min() || wide > std::numeric_limits<int>::max()) {
        fail(std::string("'") + key + "' is out of range");
    }
    return static_cast<int>(wide);
}

std::string get_string(const json& object, const char* key) {
    const json& value = object.at(key);
    if (!value.is_string()) fail(std::string("'") + key + "' must be a string");
    return value.get<std::string>();
}

HighlightMode parse_highlight(const json& node) {
    if (!node.is_object() || !node.contains("type")) {
        fail("highlight_mode must be an object with a 'type'");
    }
    const std::string type = get_string(node, "type");
    if (type == "Flat") {
        require_known_keys(node, {"type", "p_A_const"}, "highlight_mode");
        return FlatHighlight{get_real(node, "p_A_const", FlatHighlight{}.p_A_const)};
    }
    if (type == "NonFlat") {
        require_known_keys(node, {"type", "alpha", "center"}, "highlight_mode");
        NonFlatHighlight mode;
        mode.alpha = get_real(node, "alpha", mode.alpha);
        if (node.contains("center")) {
            const std::string center = get_string(node, "center");
            if (center == "Benchmark") {
                mode.center = HighlightCenter::Benchmark;
            } else if (center == "Truth") {
                mode.center = HighlightCenter::Truth;
            } else {
                fail("highlight_mode.center must be 'Benchmark' or 'Truth'");
            }
        }
        return mode;
    }
    fail("highlight_mode.type must be 'Flat' or 'NonFlat', got '" + type + "'");
}

BenchmarkMode parse_benchmark(const json& node) {
    if (!node.is_object() || !node.contains("type")) {
        fail("benchmark_mode must be an object with a 'type'");
    }
    const std::string type = get_string(node, "type");
    if (type == "Common") {
        require_known_keys(node, {"type"}, "benchmark_mode");
        return CommonBenchmark{};
    }
    if (type == "Heterogeneous") {
        require_known_keys(node, {"type", "sigma_theta_hat"}, "benchmark_mode");
        return HeterogeneousBenchmark{get_real(node, "sigma_theta_hat", 0.0)};
    }
    fail("benchmark_mode.type must be 'Common' or 'Heterogeneous', got '" + type + "'");
}

json highlight_to_json(const HighlightMode& mode) {
    if (const auto* flat = std::get_if<FlatHighlight>(&mode)) {
        return json{{"type", "Flat"}, {"p_A_const", flat->p_A_const}};
    }
    const auto& non_flat = std::get<NonFlatHighlight>(mode);
    return json{{"type", "NonFlat"},
                {"alpha", non_flat.alpha},
                {"center", non_flat.center == HighlightCenter::Benchmark ? "Benchmark" : "Truth"}};
}

json benchmark_to_json(const BenchmarkMode& mode) {
    if (const auto* het = std::get_if<HeterogeneousBenchmark>(&mode)) {
        return json{{"type", "Heterogeneous"}, {"sigma_theta_hat", het->sigma_theta_hat}};
    }
    return json{{"type", "Common"}};
}

bool in_open(double v, double lo, double hi) { return v > lo && v < hi; }

}  // namespace

double ModelConfig::gamma_of(ClickType type) const noexcept {
    switch (type) {
        case ClickType::Confirmatory: return gamma_C;
        case ClickType::Exploratory: return gamma_E;
        case ClickType::Indifferent: return gamma_I;
    }
    return gamma_I;
}

double ModelConfig::gamma_bar() const noexcept {
    return p_C * gamma_C + p_E * gamma_E + p_I * gamma_I;
}

std::vector<std::string> validate(const ModelConfig& cfg) {
    const double reals[] = {cfg.theta, cfg.theta_hat, cfg.sigma_x, cfg.sigma_y, cfg.p_C,
                            cfg.p_E,   cfg.p_I,       cfg.gamma_C, cfg.gamma_E, cfg.gamma_I,
                            cfg.beta,  cfg.eta,       cfg.lambda};
    if (!std::all_of(std::begin(reals), std::end(reals), [](double v) { return std::isfinite(v); })) {
        fail("all real parameters must be finite");
    }
    if (!(cfg.sigma_x > 0.0)) fail("sigma_x must be positive");
    if (!(cfg.sigma_y > 0.0)) fail("sigma_y must be positive");
    if (cfg.M < 2) fail("M must be at least 2");
    if (cfg.N < 1) fail("N must be at least 1");
    if (cfg.T < 1) fail("T must be at least 1");
    for (double p : {cfg.p_C, cfg.p_E, cfg.p_I}) {
        if (p < 0.0 || p > 1.0) fail("type probabilities must lie in [0,1]");
    }
    if (std::abs(cfg.p_C + cfg.p_E + cfg.p_I - 1.0) > kSumTolerance) {
        fail("p_C + p_E + p_I must equal 1");
    }
    if (!in_open(cfg.gamma_C, 0.5, 1.0)) fail("gamma_C must lie in (1/2, 1)");
    if (!in_open(cfg.gamma_E, 0.0, 0.5)) fail("gamma_E must lie in (0, 1/2)");
    if (std::abs(cfg.gamma_I - 0.5) > kSumTolerance) fail("gamma_I must equal 1/2");
    if (!(cfg.beta > 1.0)) fail("beta must exceed 1");
    if (cfg.eta < 0.0) fail("eta must be nonnegative");
    if (cfg.lambda < 0.0 || cfg.lambda > 1.0) fail("lambda must lie in [0,1]");
    if (cfg.window < 1 || cfg.window > cfg.N) fail("window must lie in [1, N]");

    if (const auto* flat = std::get_if<FlatHighlight>(&cfg.highlight_mode)) {
        if (!in_open(flat->p_A_const, 0.0, 1.0)) fail("p_A_const must lie in (0,1)");
    } else {
        const auto& non_flat = std::get<NonFlatHighlight>(cfg.highlight_mode);
        if (!std::isfinite(non_flat.alpha) || non_flat.alpha < 1.0) fail("alpha must be >= 1");
    }

    std::vector<std::string> warnings;
    if (const auto* het = std::get_if<HeterogeneousBenchmark>(&cfg.benchmark_mode)) {
        if (!std::isfinite(het->sigma_theta_hat) || het->sigma_theta_hat < 0.0) {
            fail("sigma_theta_hat must be nonnegative");
        }
        const double limit = std::min(cfg.sigma_x, cfg.sigma_y) / 4.0;
        if (het->sigma_theta_hat > limit) {
            std::ostringstream msg;
            msg << "sigma_theta_hat=" << het->sigma_theta_hat << " exceeds min(sigma_x, sigma_y)/4="
                << limit << "; results outside the analysed regime";
            warnings.push_back(msg.str());
        }
    }
    return warnings;
}

ModelConfig parse_config(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(std::string("malformed config JSON: ") + e.what());
    }
    if (!root.is_object()) fail("config must be a JSON object");
    require_known_keys(root,
                       {"theta", "theta_hat", "sigma_x", "sigma_y", "M", "N", "T", "p_C", "p_E",
                        "p_I", "gamma_C", "gamma_E", "gamma_I", "beta", "eta", "lambda",
                        "highlight_mode", "benchmark_mode", "window", "eng_normalization",
                        "master_seed"},
                       "config");

    ModelConfig cfg;
    cfg.theta = get_real(root, "theta", cfg.theta);
    cfg.theta_hat = get_real(root, "theta_hat", cfg.theta_hat);
    cfg.sigma_x = get_real(root, "sigma_x", cfg.sigma_x);
    cfg.sigma_y = get_real(root, "sigma_y", cfg.sigma_y);
    cfg.M = get_int(root, "M", cfg.M);
    cfg.N = get_int(root, "N", cfg.N);
    cfg.T = get_int(root, "T", cfg.T);
    cfg.p_C = get_real(root, "p_C", cfg.p_C);
    cfg.p_E = get_real(root, "p_E", cfg.p_E);
    cfg.p_I = get_real(root, "p_I", cfg.p_I);
    cfg.gamma_C = get_real(root, "gamma_C", cfg.gamma_C);
    cfg.gamma_E = get_real(root, "gamma_E", cfg.gamma_E);
    cfg.gamma_I = get_real(root, "gamma_I", cfg.gamma_I);
    cfg.beta = get_real(root, "beta", cfg.beta);
    cfg.eta = get_real(root, "eta", cfg.eta);
    cfg.lambda = get_real(root, "lambda", cfg.lambda);
    cfg.window = get_int(root, "window", cfg.window);
    if (root.contains("highlight_mode")) cfg.highlight_mode = parse_highlight(root["highlight_mode"]);
    if (root.contains("benchmark_mode")) cfg.benchmark_mode = parse_benchmark(root["benchmark_mode"]);
    if (root.contains("eng_normalization")) {
        const std::string norm = get_string(root, "eng_normalization");
        if (norm == "Raw") {
            cfg.eng_normalization = EngNormalization::Raw;
        } else if (norm == "PerCapita") {
            cfg.eng_normalization = EngNormalization::PerCapita;
        } else {
            fail("eng_normalization must be 'Raw' or 'PerCapita'");
        }
    }
    if (root.contains("master_seed")) {
        const json& seed = root["master_seed"];
        if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
            fail("'master_seed' must be a nonnegative integer");
        }
        cfg.master_seed = seed.get<std::uint64_t>();
    }
    validate(cfg);
    return cfg;
}

ModelConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot read config file '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string to_json(const ModelConfig& cfg) {
    json root = json::object();
    root["theta"] = cfg.theta;
    root["theta_hat"] = cfg.theta_hat;
    root["sigma_x"] = cfg.sigma_x;
    root["sigma_y"] = cfg.sigma_y;
    root["M"] = cfg.M;
    root["N"] = cfg.N;
    root["T"] = cfg.T;
    root["p_C"] = cfg.p_C;
    root["p_E"] = cfg.p_E;
    root["p_I"] = cfg.p_I;
    root["gamma_C"] = cfg.gamma_C;
    root["gamma_E"] = cfg.gamma_E;
    root["gamma_I"] = cfg.gamma_I;
    root["beta"] = cfg.beta;
    root["eta"] = cfg.eta;
    root["lambda"] = cfg.lambda;
    root["highlight_mode"] = highlight_to_json(cfg.highlight_mode);
    root["benchmark_mode"] = benchmark_to_json(cfg.benchmark_mode);
    root["window"] = cfg.window;
    root["eng_normalization"] = cfg.eng_normalization == EngNormalization::Raw ? "Raw" : "PerCapita";
    root["master_seed"] = cfg.master_seed;
    return root.dump(2) + "\n";
}

std::uint64_t config_hash(const ModelConfig& cfg) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : to_json(cfg)) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string_view mode_name(const HighlightMode& mode) noexcept {
    return std::holds_alternative<FlatHighlight>(mode) ? "Flat" : "NonFlat";
}

HighlightMode parse_highlight_mode(std::string_view json_text) {
    json node;
    try {
        node = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(std::string("malformed highlight_mode JSON: ") + e.what());
    }
    return parse_highlight(node);
}

std::string highlight_mode_json(const HighlightMode& mode) { return highlight_to_json(mode).dump(); }

}  // namespace rankdyn
