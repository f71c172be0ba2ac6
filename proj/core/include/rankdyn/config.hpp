#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rankdyn {

/// Raised for any invalid configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ClickType : std::uint8_t { Confirmatory, Exploratory, Indifferent };

enum class HighlightCenter : std::uint8_t { Benchmark, Truth };

/// Active-type probability independent of the agent's signal.
struct FlatHighlight {
    double p_A_const = 0.5;
    bool operator==(const FlatHighlight&) const = default;
};

/// Active-type probability 1 - exp(-(1/2a) ((x - c)/sigma_x)^(2a)).
struct NonFlatHighlight {
    double alpha = 4.0;
    HighlightCenter center = HighlightCenter::Benchmark;
    bool operator==(const NonFlatHighlight&) const = default;
};

using HighlightMode = std::variant<FlatHighlight, NonFlatHighlight>;

struct CommonBenchmark {
    bool operator==(const CommonBenchmark&) const = default;
};

/// Per-agent benchmarks drawn from N(theta_hat, sigma_theta_hat^2).
struct HeterogeneousBenchmark {
    double sigma_theta_hat = 0.0;
    bool operator==(const HeterogeneousBenchmark&) const = default;
};

using BenchmarkMode = std::variant<CommonBenchmark, HeterogeneousBenchmark>;

enum class EngNormalization : std::uint8_t { Raw, PerCapita };

/// Every model and protocol parameter of one experiment. Defaults are the
/// reference parameterization (sigma^2 = 9, M = 20, N = 1e5, beta = 1.25,
/// alpha = 4, 70/15/15 type mix) at desk-scale T = 200.
struct ModelConfig {
    double theta = 0.0;
    double theta_hat = 0.0;
    double sigma_x = 3.0;
    double sigma_y = 3.0;
    int M = 20;
    int N = 100000;
    int T = 200;
    double p_C = 0.7;
    double p_E = 0.15;
    double p_I = 0.15;
    double gamma_C = 0.8;
    double gamma_E = 0.4;
    double gamma_I = 0.5;
    double beta = 1.25;
    double eta = 0.0;
    double lambda = 1.0;
    HighlightMode highlight_mode = NonFlatHighlight{};
    BenchmarkMode benchmark_mode = CommonBenchmark{};
    int window = 2000;
    EngNormalization eng_normalization = EngNormalization::PerCapita;
    std::uint64_t master_seed = 20180111;

    bool operator==(const ModelConfig&) const = default;

    bool is_flat() const noexcept { return std::holds_alternative<FlatHighlight>(highlight_mode); }
    double gamma_of(ClickType type) const noexcept;
    /// p_C gamma_C + p_E gamma_E + p_I gamma_I.
    double gamma_bar() const noexcept;
};

/// Throws ConfigError on the first violated invariant. Returns non-fatal
/// warnings (e.g. benchmark dispersion outside the analysed regime).
std::vector<std::string> validate(const ModelConfig& cfg);

/// Parses a JSON document. Missing keys keep their defaults; unknown keys,
/// type mismatches and invariant violations raise ConfigError.
ModelConfig parse_config(std::string_view json_text);
ModelConfig load_config(const std::filesystem::path& path);

/// Canonical pretty-printed JSON; parse_config(to_json(c)) == c.
std::string to_json(const ModelConfig& cfg);

/// FNV-1a of the canonical JSON, for labelling outputs.
std::uint64_t config_hash(const ModelConfig& cfg);

std::string_view mode_name(const HighlightMode& mode) noexcept;

/// Parses a highlight mode object, e.g. {"type": "Flat", "p_A_const": 0.5}.
HighlightMode parse_highlight_mode(std::string_view json_text);
std::string highlight_mode_json(const HighlightMode& mode);

}  // namespace rankdyn
