#pragma once

// Information structure, agent types and the per-agent behavioral
// primitives: propensity absent ranking, click probabilities under attention
// bias, and the highlighting decision.

#include <cstdint>
#include <span>
#include <vector>

#include "rankdyn/config.hpp"
#include "rankdyn/rng.hpp"

namespace rankdyn {

/// Personalization group: L for signals below the benchmark, R otherwise.
enum class Group : std::uint8_t { L = 0, R = 1 };

constexpr Group other(Group g) noexcept { return g == Group::L ? Group::R : Group::L; }
constexpr std::size_t index_of(Group g) noexcept { return static_cast<std::size_t>(g); }

/// +1 when value >= benchmark, -1 otherwise.
constexpr int sign_relative(double value, double benchmark) noexcept {
    return value >= benchmark ? 1 : -1;
}

struct Agent {
    double x = 0.0;
    int sign = 1;
    ClickType click_type = ClickType::Indifferent;
    bool active = false;
    double theta_hat_n = 0.0;

    Group group() const noexcept { return sign > 0 ? Group::R : Group::L; }
};

struct ItemSet {
    std::vector<double> y;
    std::vector<std::int8_t> sign;
    int m_minus = 0;
    int m_plus = 0;
    double theta_hat = 0.0;

    int size() const noexcept { return static_cast<int>(y.size()); }

    /// Builds the sign bookkeeping for given signals.
    static ItemSet from_signals(std::vector<double> y, double theta_hat);
};

/// Lazily generates agent n from its own counter-based substream, so agents
/// never need to be materialized and agent n is independent of how many
/// random numbers earlier agents or the ranking consumed.
class AgentSource {
public:
    AgentSource(const ModelConfig& cfg, std::uint64_t run_seed) noexcept
        : cfg_(&cfg), run_seed_(run_seed) {}

    /// Substream of agent n, positioned at its first draw.
    CounterStream stream(std::uint64_t n) const noexcept {
        return {run_seed_, StreamPurpose::Agent, n};
    }

    Agent operator()(std::uint64_t n) const {
        CounterStream s = stream(n);
        return draw(s);
    }

    /// Draws an agent from `s` (a normal pair for the signal and benchmark
    /// offset, then 32-bit uniforms for click type and highlight type);
    /// afterwards `s` is positioned at the agent's click draw.
    Agent draw(CounterStream& s) const;

private:
    const ModelConfig* cfg_;
    std::uint64_t run_seed_;
};

struct World {
    ItemSet items;
    AgentSource agents;
};

/// Draws item signals (redrawing until both signs are present, at most 100
/// times) and binds the lazy agent source. Throws ConfigError on exhaustion.
World sample_world(const ModelConfig& cfg, std::uint64_t run_seed);

/// Item draw only; used by sample_world.
ItemSet sample_items(const ModelConfig& cfg, std::uint64_t run_seed);

inline constexpr int kMaxItemRedraws = 100;

/// phi_{n,m}: gamma_k/[m] on sign match, (1-gamma_k)/[m] otherwise, with
/// signs and class sizes measured against the agent's own benchmark.
std::vector<double> propensity_absent_ranking(const Agent& agent, const ItemSet& items,
                                              const ModelConfig& cfg);

/// Same as above, writing into `phi` (size M) without allocating.
void propensity_absent_ranking(const Agent& agent, const ItemSet& items, const ModelConfig& cfg,
                               std::span<double> phi);

/// rho_m = beta^(M - r_m) phi_m / sum_m' beta^(M - r_m') phi_m'.
std::vector<double> click_probabilities(std::span<const double> phi, std::span<const int> ranks,
                                        double beta);

/// Probability of being an active (highlighting) type for signal x, using
/// `benchmark` as the non-flat center when the center is the benchmark.
double highlight_probability(double x, const ModelConfig& cfg, double benchmark);

inline double highlight_probability(double x, const ModelConfig& cfg) {
    return highlight_probability(x, cfg, cfg.theta_hat);
}

/// Active agent and |y - x| <= sigma_x/2.
constexpr bool wants_highlight(const Agent& agent, double y, double sigma_x) noexcept {
    const double distance = y >= agent.x ? y - agent.x : agent.x - y;
    return agent.active && distance <= sigma_x / 2.0;
}

}  // namespace rankdyn
