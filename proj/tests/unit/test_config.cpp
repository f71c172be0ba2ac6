#include <string>

#include "doctest.h"
#include "rankdyn/config.hpp"

using namespace rankdyn;

TEST_CASE("defaults are the reference parameterization and validate cleanly") {
    const ModelConfig cfg;
    CHECK(validate(cfg).empty());
    CHECK(cfg.sigma_x * cfg.sigma_x == doctest::Approx(9.0));
    CHECK(cfg.M == 20);
    CHECK(cfg.N == 100000);
    CHECK(cfg.beta == doctest::Approx(1.25));
    CHECK(cfg.gamma_bar() == doctest::Approx(0.7 * 0.8 + 0.15 * 0.4 + 0.15 * 0.5));
    CHECK(std::get<NonFlatHighlight>(cfg.highlight_mode).alpha == 4.0);
}

TEST_CASE("JSON round trip preserves every field") {
    ModelConfig cfg;
    cfg.theta = 6.0;
    cfg.eta = 37.5;
    cfg.lambda = 0.25;
    cfg.highlight_mode = NonFlatHighlight{2.0, HighlightCenter::Truth};
    cfg.benchmark_mode = HeterogeneousBenchmark{0.5};
    cfg.eng_normalization = EngNormalization::Raw;
    cfg.master_seed = 18446744073709551615ull;
    CHECK(parse_config(to_json(cfg)) == cfg);

    ModelConfig flat;
    flat.highlight_mode = FlatHighlight{0.3};
    CHECK(parse_config(to_json(flat)) == flat);
    CHECK(config_hash(flat) != config_hash(cfg));
    CHECK(config_hash(flat) == config_hash(parse_config(to_json(flat))));
}

TEST_CASE("missing keys keep defaults") {
    const ModelConfig cfg = parse_config(R"({"eta": 10, "highlight_mode": {"type": "Flat"}})");
    CHECK(cfg.eta == 10.0);
    CHECK(cfg.M == 20);
    CHECK(std::get<FlatHighlight>(cfg.highlight_mode).p_A_const == 0.5);
}

TEST_CASE("invalid documents raise ConfigError") {
    const char* bad[] = {
        R"({"etaa": 1})",
        R"({"eta": -1})",
        R"({"lambda": 1.5})",
        R"({"beta": 1.0})",
        R"({"p_C": 0.8})",
        R"({"gamma_C": 0.5})",
        R"({"gamma_E": 0.5})",
        R"({"gamma_I": 0.6})",
        R"({"M": 1})",
        R"({"N": 10, "window": 11})",
        R"({"window": 0})",
        R"({"T": 0})",
        R"({"sigma_x": 0})",
        R"({"M": 2.5})",
        R"({"eta": "big"})",
        R"({"highlight_mode": {"type": "Flat", "p_A_const": 1.0}})",
        R"({"highlight_mode": {"type": "NonFlat", "alpha": 0.5}})",
        R"({"highlight_mode": {"type": "Other"}})",
        R"({"highlight_mode": {"type": "NonFlat", "center": "Middle"}})",
        R"({"benchmark_mode": {"type": "Heterogeneous", "sigma_theta_hat": -1}})",
        R"({"eng_normalization": "Log"})",
        R"({"master_seed": -3})",
        R"([1, 2])",
        R"({"eta": )",
    };
    for (const char* text : bad) {
        INFO(text);
        CHECK_THROWS_AS(parse_config(text), ConfigError);
    }
}

TEST_CASE("wide benchmark dispersion warns without failing") {
    ModelConfig cfg;
    cfg.benchmark_mode = HeterogeneousBenchmark{0.75};
    CHECK(validate(cfg).empty());
    cfg.benchmark_mode = HeterogeneousBenchmark{0.76};
    CHECK(validate(cfg).size() == 1);
}

TEST_CASE("highlight modes parse on their own") {
    CHECK(mode_name(parse_highlight_mode(R"({"type": "Flat", "p_A_const": 0.2})")) == "Flat");
    const HighlightMode m = NonFlatHighlight{3.0, HighlightCenter::Truth};
    CHECK(parse_highlight_mode(highlight_mode_json(m)) == m);
}

TEST_CASE("an unreadable config path is a ConfigError") {
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}
