#include "rankdyn/model.hpp"

#include <cassert>
#include <cmath>
#include <string>

namespace rankdyn {
namespace {

double integer_power(double base, double exponent) noexcept {
    if (exponent == std::floor(exponent) && exponent >= 1.0 && exponent <= 16.0) {
        double result = base;
        for (int k = 1; k < static_cast<int>(exponent); ++k) result *= base;
        return result;
    }
    return std::pow(base, exponent);
}

}  // namespace

ItemSet ItemSet::from_signals(std::vector<double> y, double theta_hat) {
    ItemSet items;
    items.theta_hat = theta_hat;
    items.sign.reserve(y.size());
    for (double v : y) {
        const int s = sign_relative(v, theta_hat);
        items.sign.push_back(static_cast<std::int8_t>(s));
        (s > 0 ? items.m_plus : items.m_minus) += 1;
    }
    items.y = std::move(y);
    return items;
}

Agent AgentSource::draw(CounterStream& s) const {
    const ModelConfig& cfg = *cfg_;
    const auto normals = s.normal_pair();
    const double u_type = s.uniform32();
    const double u_active = s.uniform32();

    Agent agent;
    agent.x = cfg.theta + cfg.sigma_x * normals[0];
    agent.theta_hat_n = cfg.theta_hat;
    if (const auto* het = std::get_if<HeterogeneousBenchmark>(&cfg.benchmark_mode)) {
        agent.theta_hat_n = cfg.theta_hat + het->sigma_theta_hat * normals[1];
    }
    agent.sign = sign_relative(agent.x, agent.theta_hat_n);
    if (u_type < cfg.p_C) {
        agent.click_type = ClickType::Confirmatory;
    } else if (u_type < cfg.p_C + cfg.p_E) {
        agent.click_type = ClickType::Exploratory;
    } else {
        agent.click_type = ClickType::Indifferent;
    }
    agent.active = u_active < highlight_probability(agent.x, cfg, agent.theta_hat_n);
    return agent;
}

ItemSet sample_items(const ModelConfig& cfg, std::uint64_t run_seed) {
    const auto m = static_cast<std::size_t>(cfg.M);
    for (int attempt = 0; attempt < kMaxItemRedraws; ++attempt) {
        CounterStream s(run_seed, StreamPurpose::Items, static_cast<std::uint64_t>(attempt));
        std::vector<double> y;
        y.reserve(m);
        while (y.size() < m) {
            const auto pair = s.normal_pair();
            y.push_back(cfg.theta + cfg.sigma_y * pair[0]);
            if (y.size() < m) y.push_back(cfg.theta + cfg.sigma_y * pair[1]);
        }
        ItemSet items = ItemSet::from_signals(std::move(y), cfg.theta_hat);
        if (items.m_minus > 0 && items.m_plus > 0) return items;
    }
    throw ConfigError("item signals fell on one side of the benchmark in " +
                      std::to_string(kMaxItemRedraws) + " consecutive draws");
}

World sample_world(const ModelConfig& cfg, std::uint64_t run_seed) {
    return World{sample_items(cfg, run_seed), AgentSource(cfg, run_seed)};
}

void propensity_absent_ranking(const Agent& agent, const ItemSet& items, const ModelConfig& cfg,
                               std::span<double> phi) {
    const int m = items.size();
    assert(phi.size() == static_cast<std::size_t>(m));
    int plus = 0;
    for (int i = 0; i < m; ++i) plus += items.y[i] >= agent.theta_hat_n ? 1 : 0;
    const int minus = m - plus;
    const double gamma = cfg.gamma_of(agent.click_type);
    for (int i = 0; i < m; ++i) {
        const int item_sign = sign_relative(items.y[i], agent.theta_hat_n);
        const int class_size = item_sign > 0 ? plus : minus;
        const double weight = item_sign == agent.sign ? gamma : 1.0 - gamma;
        phi[i] = weight / class_size;
    }
}

std::vector<double> propensity_absent_ranking(const Agent& agent, const ItemSet& items,
                                              const ModelConfig& cfg) {
    std::vector<double> phi(static_cast<std::size_t>(items.size()));
    propensity_absent_ranking(agent, items, cfg, phi);
    return phi;
}

std::vector<double> click_probabilities(std::span<const double> phi, std::span<const int> ranks,
                                        double beta) {
    assert(phi.size() == ranks.size());
    const int m = static_cast<int>(phi.size());
    std::vector<double> rho(phi.size());
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        rho[i] = std::pow(beta, m - ranks[i]) * phi[i];
        total += rho[i];
    }
    for (double& r : rho) r /= total;
    return rho;
}

double highlight_probability(double x, const ModelConfig& cfg, double benchmark) {
    if (const auto* flat = std::get_if<FlatHighlight>(&cfg.highlight_mode)) {
        return flat->p_A_const;
    }
    const auto& mode = std::get<NonFlatHighlight>(cfg.highlight_mode);
    const double center = mode.center == HighlightCenter::Benchmark ? benchmark : cfg.theta;
    const double z = (x - center) / cfg.sigma_x;
    const double exponent = integer_power(z * z, mode.alpha) / (2.0 * mode.alpha);
    return -std::expm1(-exponent);
}

}  // namespace rankdyn
