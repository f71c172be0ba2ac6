#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "rankdyn/rng.hpp"

using namespace rankdyn;

TEST_CASE("philox4x32-10 matches the published known-answer vectors") {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::apply(C{0, 0, 0, 0}, K{0, 0}) ==
          C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(Philox4x32::apply(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                            K{0xffffffffu, 0xffffffffu}) ==
          C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(Philox4x32::apply(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                            K{0xa4093822u, 0x299f31d0u}) ==
          C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible and separated by purpose and index") {
    CounterStream a(42, StreamPurpose::Agent, 7);
    CounterStream b(42, StreamPurpose::Agent, 7);
    CounterStream c(42, StreamPurpose::Ranking, 7);
    CounterStream d(42, StreamPurpose::Agent, 8);
    std::vector<std::uint32_t> va, vb, vc, vd;
    for (int i = 0; i < 16; ++i) {
        va.push_back(a());
        vb.push_back(b());
        vc.push_back(c());
        vd.push_back(d());
    }
    CHECK(va == vb);
    CHECK(va != vc);
    CHECK(va != vd);
}

TEST_CASE("run seeds are distinct across run indices and master seeds") {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t master : {0ull, 1ull, 20180111ull}) {
        for (std::uint64_t t = 0; t < 1000; ++t) seeds.insert(derive_run_seed(master, t));
    }
    CHECK(seeds.size() == 3000);
}

TEST_CASE("uniform draws stay in range with the right mean") {
    CounterStream s(1, StreamPurpose::Replicate, 0);
    double sum = 0.0, sum32 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        const double v = s.uniform32();
        const double w = s.uniform_open_closed();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
        REQUIRE(w > 0.0);
        REQUIRE(w <= 1.0);
        sum += u;
        sum32 += v;
    }
    const double se = std::sqrt(1.0 / 12.0 / n);
    CHECK(std::abs(sum / n - 0.5) < 4 * se);
    CHECK(std::abs(sum32 / n - 0.5) < 4 * se);
}

TEST_CASE("normal pairs have unit variance and no correlation") {
    CounterStream s(2, StreamPurpose::Replicate, 0);
    const int n = 100000;
    double m0 = 0, m1 = 0, s0 = 0, s1 = 0, cross = 0;
    for (int i = 0; i < n; ++i) {
        const auto [z0, z1] = s.normal_pair();
        m0 += z0;
        m1 += z1;
        s0 += z0 * z0;
        s1 += z1 * z1;
        cross += z0 * z1;
    }
    CHECK(std::abs(m0 / n) < 0.015);
    CHECK(std::abs(m1 / n) < 0.015);
    CHECK(std::abs(s0 / n - 1.0) < 0.02);
    CHECK(std::abs(s1 / n - 1.0) < 0.02);
    CHECK(std::abs(cross / n) < 0.015);
}

TEST_CASE("below is unbiased for a non-power-of-two bound") {
    CounterStream s(3, StreamPurpose::Replicate, 0);
    const std::uint32_t bound = 7;
    std::array<int, 7> counts{};
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        const auto v = s.below(bound);
        REQUIRE(v < bound);
        counts[v] += 1;
    }
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
    CHECK(chi2 < 22.46);  // chi-square 6 dof, p = 0.001
}

TEST_CASE("shuffle yields every permutation of three elements uniformly") {
    CounterStream s(4, StreamPurpose::Replicate, 0);
    std::array<int, 6> counts{};
    const int n = 60000;
    for (int i = 0; i < n; ++i) {
        std::array<int, 3> v{0, 1, 2};
        s.shuffle(v.begin(), v.end());
        int code = 0;
        std::array<int, 3> p{0, 1, 2};
        for (int k = 0; k < 6; ++k, std::next_permutation(p.begin(), p.end())) {
            if (p == v) code = k;
        }
        counts[code] += 1;
    }
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - n / 6.0) * (c - n / 6.0) / (n / 6.0);
    CHECK(chi2 < 20.52);  // chi-square 5 dof, p = 0.001
}
