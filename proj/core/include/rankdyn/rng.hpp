#pragma once

// Counter-based random streams.
//
// Every random quantity in a run is addressed by (run key, purpose, index,
// position), so any agent or any run can be regenerated in isolation and the
// result never depends on thread scheduling.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace rankdyn {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter apply(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeylA;
                key[1] += kWeylB;
            }
            ctr = single_round(ctr, key);
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMulA = 0xD2511F53u;
    static constexpr std::uint32_t kMulB = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
    static constexpr std::uint32_t kWeylB = 0xBB67AE85u;

    static constexpr Counter single_round(const Counter& c, const Key& k) noexcept {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Seed of run `run_index` in an ensemble seeded by `master_seed`.
///
/// run_seed = mix64(mix64(master_seed) ^ mix64(run_index + 1)). This formula
/// is part of the output contract: changing it changes every emitted number.
constexpr std::uint64_t derive_run_seed(std::uint64_t master_seed,
                                        std::uint64_t run_index) noexcept {
    return mix64(mix64(master_seed) ^ mix64(run_index + 1));
}

/// What a stream is used for. The tag occupies the top byte of the counter,
/// so streams with different purposes never overlap.
enum class StreamPurpose : std::uint8_t {
    Items = 1,
    Agent = 2,
    Ranking = 3,
    Replicate = 4,
};

/// A sequential view over one Philox substream.
///
/// Satisfies UniformRandomBitGenerator, but the helpers below should be used
/// for distributions so results do not depend on the standard library vendor.
class CounterStream {
public:
    using result_type = std::uint32_t;

    CounterStream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          index_lo_(static_cast<std::uint32_t>(index)),
          index_hi_(static_cast<std::uint32_t>((index >> 32) & 0x00FFFFFFu) |
                    (static_cast<std::uint32_t>(purpose) << 24)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return 0xFFFFFFFFu; }

    result_type operator()() noexcept {
        if (lane_ == 4) {
            refill();
        }
        return buffer_[lane_++];
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept {
        const std::uint64_t hi = (*this)() >> 5;  // 27 bits
        const std::uint64_t lo = (*this)() >> 6;  // 26 bits
        return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
    }

    /// Uniform on [0, 1) with 32 random bits (one word).
    double uniform32() noexcept { return static_cast<double>((*this)()) * 0x1.0p-32; }

    /// Uniform on (0, 1].
    double uniform_open_closed() noexcept { return 1.0 - uniform(); }

    /// Unbiased integer in [0, bound) (Lemire's multiply-and-reject).
    std::uint32_t below(std::uint32_t bound) noexcept {
        std::uint64_t m = static_cast<std::uint64_t>((*this)()) * bound;
        auto low = static_cast<std::uint32_t>(m);
        if (low < bound) {
            const std::uint32_t threshold = (0u - bound) % bound;
            while (low < threshold) {
                m = static_cast<std::uint64_t>((*this)()) * bound;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    /// Pair of independent standard normals (Box-Muller).
    std::array<double, 2> normal_pair() noexcept {
        const double radius = std::sqrt(-2.0 * std::log(uniform_open_closed()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    double normal() noexcept { return normal_pair()[0]; }

    /// Fisher-Yates shuffle of a random-access range.
    template <typename It>
    void shuffle(It first, It last) noexcept {
        const auto n = static_cast<std::uint32_t>(last - first);
        for (std::uint32_t i = n; i > 1; --i) {
            const std::uint32_t j = below(i);
            std::swap(first[i - 1], first[j]);
        }
    }

private:
    void refill() noexcept {
        const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_),
                                      static_cast<std::uint32_t>(block_ >> 32), index_lo_,
                                      index_hi_};
        buffer_ = Philox4x32::apply(ctr, key_);
        ++block_;
        lane_ = 0;
    }

    Philox4x32::Key key_;
    std::uint32_t index_lo_;
    std::uint32_t index_hi_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buffer_{};
    int lane_ = 4;
};

}  // namespace rankdyn
