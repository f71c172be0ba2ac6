#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "rankdyn/model.hpp"
#include "rankdyn/quadrature.hpp"

using namespace rankdyn;

namespace {

Agent make_agent(ClickType type, int sign, double x = 0.0) {
    Agent a;
    a.click_type = type;
    a.sign = sign;
    a.x = x;
    a.theta_hat_n = 0.0;
    return a;
}

ItemSet balanced_items(int per_side) {
    std::vector<double> y;
    for (int i = 0; i < per_side; ++i) {
        y.push_back(-1.0 - i);
        y.push_back(1.0 + i);
    }
    return ItemSet::from_signals(y, 0.0);
}

}  // namespace

TEST_CASE("item sets count signs with the benchmark itself on the plus side") {
    const ItemSet items = ItemSet::from_signals({-1.0, 0.0, 2.0}, 0.0);
    CHECK(items.m_minus == 1);
    CHECK(items.m_plus == 2);
    CHECK(items.sign[1] == 1);
    CHECK(sign_relative(0.0, 0.0) == 1);
    CHECK(sign_relative(-1e-300, 0.0) == -1);
}

TEST_CASE("propensities follow the worked values and sum to one") {
    const ModelConfig cfg;
    const ItemSet items = balanced_items(10);
    const auto conf = propensity_absent_ranking(make_agent(ClickType::Confirmatory, 1), items, cfg);
    const auto indiff = propensity_absent_ranking(make_agent(ClickType::Indifferent, -1), items, cfg);
    const auto expl = propensity_absent_ranking(make_agent(ClickType::Exploratory, 1), items, cfg);
    for (int m = 0; m < items.size(); ++m) {
        const bool plus = items.sign[m] > 0;
        if (plus) CHECK(conf[m] == doctest::Approx(0.08));
        CHECK(indiff[m] == doctest::Approx(0.05));
        if (!plus) CHECK(expl[m] == doctest::Approx(0.06));
    }
    for (const auto* phi : {&conf, &indiff, &expl}) {
        CHECK(std::abs(std::accumulate(phi->begin(), phi->end(), 0.0) - 1.0) < 1e-9);
    }

    const ItemSet skewed = ItemSet::from_signals({-3, -2, 1, 2, 3, 4, 5}, 0.0);
    for (ClickType t : {ClickType::Confirmatory, ClickType::Exploratory, ClickType::Indifferent}) {
        for (int sign : {-1, 1}) {
            const auto phi = propensity_absent_ranking(make_agent(t, sign), skewed, cfg);
            CHECK(std::abs(std::accumulate(phi.begin(), phi.end(), 0.0) - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("click probabilities match the worked values") {
    const std::vector<double> phi2{0.5, 0.5};
    const std::vector<int> ranks2{1, 2};
    const auto rho2 = click_probabilities(phi2, ranks2, 1.25);
    CHECK(rho2[0] == doctest::Approx(0.5556).epsilon(1e-4));
    CHECK(rho2[1] == doctest::Approx(0.4444).epsilon(1e-4));

    const std::vector<double> phi3{0.2, 0.3, 0.5};
    const std::vector<int> ranks3{3, 2, 1};
    const auto rho3 = click_probabilities(phi3, ranks3, 2.0);
    CHECK(rho3[0] == doctest::Approx(0.2 / 2.8));
    CHECK(rho3[1] == doctest::Approx(0.6 / 2.8));
    CHECK(rho3[2] == doctest::Approx(2.0 / 2.8));

    const auto flat = click_probabilities(phi3, ranks3, 1.0 + 1e-12);
    for (int m = 0; m < 3; ++m) CHECK(flat[m] == doctest::Approx(phi3[m]));
}

TEST_CASE("click probabilities are scale invariant, normalized and symmetric") {
    const std::vector<double> phi{0.1, 0.25, 0.25, 0.4};
    const std::vector<int> ranks{2, 4, 1, 3};
    const auto rho = click_probabilities(phi, ranks, 1.7);
    CHECK(std::abs(std::accumulate(rho.begin(), rho.end(), 0.0) - 1.0) < 1e-9);

    std::vector<double> scaled(phi);
    for (double& v : scaled) v *= 37.0;
    const auto rho_scaled = click_probabilities(scaled, ranks, 1.7);
    for (std::size_t m = 0; m < rho.size(); ++m) CHECK(rho_scaled[m] == doctest::Approx(rho[m]));

    const std::vector<int> swapped{2, 1, 4, 3};
    const auto rho_swapped = click_probabilities(phi, swapped, 1.7);
    CHECK(rho_swapped[1] == rho[2]);
    CHECK(rho_swapped[2] == rho[1]);
}

TEST_CASE("highlight probability matches the worked values and its shape") {
    ModelConfig cfg;
    cfg.highlight_mode = NonFlatHighlight{1.0};
    CHECK(highlight_probability(cfg.theta_hat, cfg) == 0.0);
    CHECK(highlight_probability(cfg.sigma_x, cfg) == doctest::Approx(1.0 - std::exp(-0.5)));
    CHECK(highlight_probability(cfg.sigma_x, cfg) == doctest::Approx(0.39347).epsilon(1e-5));
    cfg.highlight_mode = NonFlatHighlight{4.0};
    CHECK(highlight_probability(cfg.sigma_x, cfg) == doctest::Approx(0.11750).epsilon(1e-5));

    double previous = 0.0;
    for (double d = 0.0; d < 20.0; d += 0.05) {
        const double up = highlight_probability(d, cfg);
        const double down = highlight_probability(-d, cfg);
        CHECK(up == down);
        CHECK(up >= previous);
        CHECK(up >= 0.0);
        CHECK(up <= 1.0);
        previous = up;
    }
    CHECK(highlight_probability(3.0, cfg) < 1.0);

    cfg.theta = 2.0;
    cfg.highlight_mode = NonFlatHighlight{4.0, HighlightCenter::Truth};
    CHECK(highlight_probability(2.0, cfg) == 0.0);

    cfg.highlight_mode = FlatHighlight{0.3};
    CHECK(highlight_probability(-7.0, cfg) == 0.3);
    CHECK(highlight_probability(0.0, cfg) == 0.3);
}

TEST_CASE("highlighting requires an active agent within half a signal sd") {
    Agent a = make_agent(ClickType::Confirmatory, 1, 1.0);
    a.active = true;
    CHECK(wants_highlight(a, 1.0, 3.0));
    CHECK(wants_highlight(a, 2.5, 3.0));
    CHECK(wants_highlight(a, -0.5, 3.0));
    CHECK_FALSE(wants_highlight(a, 2.5000001, 3.0));
    a.active = false;
    CHECK_FALSE(wants_highlight(a, 1.0, 3.0));
}

TEST_CASE("worlds are deterministic and contain both signs") {
    const ModelConfig cfg;
    const ItemSet a = sample_items(cfg, 99);
    const ItemSet b = sample_items(cfg, 99);
    CHECK(a.y == b.y);
    CHECK(a.m_minus >= 1);
    CHECK(a.m_plus >= 1);
    CHECK(a.m_minus + a.m_plus == cfg.M);
    CHECK(sample_items(cfg, 100).y != a.y);

    const World w = sample_world(cfg, 99);
    CHECK(w.items.y == a.y);
    const Agent x = w.agents(17);
    const Agent y = w.agents(17);
    CHECK(x.x == y.x);
    CHECK(x.click_type == y.click_type);
    CHECK(x.active == y.active);
}

TEST_CASE("item signals have the configured mean and variance") {
    ModelConfig cfg;
    cfg.M = 100000;
    cfg.N = 1;
    cfg.window = 1;
    const ItemSet items = sample_items(cfg, 5);
    double mean = 0.0;
    for (double y : items.y) mean += y;
    mean /= cfg.M;
    double var = 0.0;
    for (double y : items.y) var += (y - mean) * (y - mean);
    var /= cfg.M - 1;
    CHECK(std::abs(mean - cfg.theta) < 3.0 * cfg.sigma_y / std::sqrt(cfg.M));
    CHECK(std::abs(var - 9.0) < 3.0 * 9.0 * std::sqrt(2.0 / (cfg.M - 1)));
}

TEST_CASE("agent types, signals and activity follow their distributions") {
    const ModelConfig cfg;
    const AgentSource source(cfg, 12345);
    const int n = 1000000;
    std::array<int, 3> types{};
    int active = 0;
    double sum_x = 0.0;
    for (int i = 0; i < n; ++i) {
        const Agent a = source(static_cast<std::uint64_t>(i));
        types[static_cast<std::size_t>(a.click_type)] += 1;
        active += a.active ? 1 : 0;
        sum_x += a.x;
        REQUIRE(a.theta_hat_n == cfg.theta_hat);
        REQUIRE(a.sign == sign_relative(a.x, cfg.theta_hat));
    }
    const double p[3] = {cfg.p_C, cfg.p_E, cfg.p_I};
    for (int t = 0; t < 3; ++t) {
        CHECK(std::abs(types[t] / double(n) - p[t]) < 3.0 * std::sqrt(p[t] * (1 - p[t]) / n));
    }
    CHECK(std::abs(sum_x / n) < 3.0 * cfg.sigma_x / std::sqrt(n));

    const Integrator integrate;
    const double expected = integrate(
        [&](double x) {
            const double z = x / cfg.sigma_x;
            return highlight_probability(x, cfg) * std::exp(-0.5 * z * z) /
                   (cfg.sigma_x * std::sqrt(2.0 * M_PI));
        },
        -8.0 * cfg.sigma_x, 8.0 * cfg.sigma_x, std::vector<double>{0.0});
    const double freq = active / double(n);
    CHECK(std::abs(freq - expected) < 3.0 * std::sqrt(expected * (1 - expected) / n));
}

TEST_CASE("zero benchmark dispersion reproduces the common benchmark") {
    ModelConfig common;
    ModelConfig het = common;
    het.benchmark_mode = HeterogeneousBenchmark{0.0};
    const AgentSource a(common, 7);
    const AgentSource b(het, 7);
    for (std::uint64_t n = 0; n < 1000; ++n) {
        const Agent x = a(n);
        const Agent y = b(n);
        REQUIRE(x.x == y.x);
        REQUIRE(x.sign == y.sign);
        REQUIRE(x.click_type == y.click_type);
        REQUIRE(x.active == y.active);
        REQUIRE(x.theta_hat_n == y.theta_hat_n);
    }
}
