#include <cmath>
#include <vector>

#include "doctest.h"
#include "rankdyn/metrics.hpp"

using namespace rankdyn;

namespace {

ClickEvent event(Group g, double y, bool highlighted = false, int item = 0) {
    ClickEvent ev;
    ev.group = g;
    ev.y = y;
    ev.highlighted = highlighted;
    ev.item = static_cast<std::int16_t>(item);
    return ev;
}

}  // namespace

TEST_CASE("engagement counts clicks plus highlights") {
    std::vector<ClickEvent> w;
    for (int i = 0; i < 2000; ++i) w.push_back(event(i % 2 ? Group::L : Group::R, 0.0, i < 500));
    const Engagement e = compute_eng(w);
    CHECK(e.eng == 2500.0);
    CHECK(e.eng_L + e.eng_R == e.eng);
    CHECK(e.eng_L == 1000.0 + 250.0);
    for (auto& ev : w) ev.highlighted = false;
    CHECK(compute_eng(w).eng == 2000.0);
}

TEST_CASE("misinformation is the mean distance from the truth") {
    CHECK(compute_mis(std::vector<ClickEvent>{event(Group::L, 1.5), event(Group::R, 1.5)}, 1.5) == 0.0);
    CHECK(compute_mis(std::vector<ClickEvent>{event(Group::L, -2.0), event(Group::R, 2.0)}, 0.0) == 2.0);
}

TEST_CASE("polarization follows the worked values") {
    CHECK(compute_pol(std::vector<ClickEvent>{event(Group::R, 3.0), event(Group::L, -3.0)}) == 3.0);
    CHECK(compute_pol(std::vector<ClickEvent>{event(Group::R, 1.2), event(Group::L, 1.2)}) == 0.0);
    CHECK(compute_pol_gap(std::vector<ClickEvent>{event(Group::R, 3.0), event(Group::L, -3.0)}) == 6.0);
    CHECK(compute_pol_gap(std::vector<ClickEvent>{event(Group::R, 1.0), event(Group::R, 3.0),
                                                   event(Group::L, 0.0)}) == 2.0);
    CHECK(compute_pol_gap(std::vector<ClickEvent>{event(Group::R, 2.5)}) == 2.5);
}

TEST_CASE("concentration spans monopoly to uniform") {
    CHECK(compute_hhi(std::vector<std::int64_t>{0, 7, 0}) == doctest::Approx(10000.0));
    CHECK(compute_hhi(std::vector<std::int64_t>(20, 13)) == doctest::Approx(500.0));
}

TEST_CASE("welfare trades engagement against misinformation times polarization") {
    CHECK(compute_welfare(1.2, 2.0, 1.5, 1.0) == 1.2);
    CHECK(compute_welfare(1.2, 2.0, 1.5, 0.0) == -3.0);
    CHECK(compute_welfare(1.2, 2.0, 1.5, 0.5) == doctest::Approx(-0.9));
}

TEST_CASE("weighted affective polarization matches the worked values") {
    CHECK(compute_wap(std::vector<double>{0.5, 0.5}, std::vector<double>{10, 0}) ==
          doctest::Approx(std::sqrt(5.0)));
    CHECK(compute_wap(std::vector<double>{0.5, 0.3, 0.2}, std::vector<double>{8, 2, 5}) ==
          doctest::Approx(std::sqrt(2.4)));
    CHECK_THROWS_AS(compute_wap(std::vector<double>{0.5}, std::vector<double>{1, 2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(compute_wap(std::vector<double>{0.8, 0.8}, std::vector<double>{1, 2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(compute_wap(std::vector<double>{-0.1, 0.5}, std::vector<double>{1, 2}),
                    std::invalid_argument);
}

TEST_CASE("window indices combine every index and the trailing window") {
    std::vector<ClickEvent> events;
    for (int n = 0; n < 10; ++n) {
        ClickEvent ev = event(n % 2 ? Group::R : Group::L, n % 2 ? 1.0 : -1.0, n % 3 == 0, n % 4);
        ev.n = n;
        events.push_back(ev);
    }
    const auto tail = trailing_window(events, 4);
    REQUIRE(tail.size() == 4);
    CHECK(tail.front().n == 6);
    CHECK(trailing_window(events, 10).size() == 10);
    CHECK(trailing_window(events, 50).size() == 10);

    const std::vector<double> psi{0.0, 1.0};
    const WindowIndices w = compute_window_indices(events, 4, 0.0, EngNormalization::PerCapita, psi);
    CHECK(w.window == 10);
    CHECK(w.eng == 14.0);
    CHECK(w.eng_per_capita == doctest::Approx(1.4));
    CHECK(w.mis == 1.0);
    CHECK(w.pol == 1.0);
    CHECK(w.pol_gap == 2.0);
    CHECK(w.hhi == doctest::Approx(30.0 * 30 + 30.0 * 30 + 20.0 * 20 + 20.0 * 20));
    CHECK(w.welfare == std::vector<double>{-1.0, 1.4});
    const WindowIndices raw = compute_window_indices(events, 4, 0.0, EngNormalization::Raw, psi);
    CHECK(raw.welfare[1] == 14.0);
}

TEST_CASE("summaries use the sample standard deviation") {
    const IndexStat s = summarize_values(std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK(s.mean == 2.5);
    CHECK(s.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(s.band3se == doctest::Approx(3.0 * s.sd / 2.0));
    CHECK(s.ci95(4) == doctest::Approx(1.959963984540054 * s.sd / 2.0));
    CHECK(summarize_values(std::vector<double>{7.0}).sd == 0.0);

    std::vector<WindowIndices> runs(3);
    for (int i = 0; i < 3; ++i) {
        runs[i].window = 5;
        runs[i].mis = i;
        runs[i].welfare = {double(i), 2.0 * i};
    }
    const std::vector<double> psi{0.0, 0.5};
    const IndexReport r = summarize(runs, psi);
    CHECK(r.runs == 3);
    CHECK(r.window == 5);
    CHECK(r.mis.mean == 1.0);
    CHECK(r.mis.sd == 1.0);
    CHECK(r.welfare.size() == 2);
    CHECK(r.welfare[1].mean == 2.0);
}
