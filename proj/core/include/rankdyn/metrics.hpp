#pragma once

// Evaluation indices computed on a window of click events: engagement,
// misinformation, polarization, traffic concentration and welfare, plus the
// weighted affective polarization formula and ensemble summaries.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rankdyn/config.hpp"
#include "rankdyn/model.hpp"

namespace rankdyn {

struct ClickEvent {
    std::int32_t n = 0;
    Group group = Group::L;
    std::int16_t item = 0;
    bool highlighted = false;
    std::int16_t rank_seen = 0;
    double y = 0.0;

    bool operator==(const ClickEvent&) const = default;
};

struct Engagement {
    double eng = 0.0;
    double eng_L = 0.0;
    double eng_R = 0.0;
};

/// Clicks plus highlights over the window, in total and per group.
Engagement compute_eng(std::span<const ClickEvent> window);

/// (1/W) sum |y(n) - theta|.
double compute_mis(std::span<const ClickEvent> window, double theta);

/// (1/W) |sum_{n in R} y(n) - sum_{n in L} y(n)|.
double compute_pol(std::span<const ClickEvent> window);

/// |mean_R y - mean_L y| over the window; an empty group contributes 0.
double compute_pol_gap(std::span<const ClickEvent> window);

/// sum_m (100 c_m / W)^2 with W = sum_m c_m; on the 0..10000 scale.
double compute_hhi(std::span<const std::int64_t> clicks_per_item);

/// psi * eng_basis - (1 - psi) * mis * pol.
constexpr double compute_welfare(double eng_basis, double mis, double pol, double psi) noexcept {
    return psi * eng_basis - (1.0 - psi) * mis * pol;
}

/// sqrt(sum_p v_p |s_p - sbar|) with sbar = sum_p v_p s_p. Throws
/// std::invalid_argument on mismatched lengths or invalid shares.
double compute_wap(std::span<const double> vote_shares, std::span<const double> sympathy);

/// Every index of one run's trailing window.
struct WindowIndices {
    int window = 0;
    double eng = 0.0;
    double eng_L = 0.0;
    double eng_R = 0.0;
    double eng_per_capita = 0.0;
    double mis = 0.0;
    double pol = 0.0;
    double pol_gap = 0.0;
    double hhi = 0.0;
    std::vector<double> welfare;  // one per psi in the requested list

    bool operator==(const WindowIndices&) const = default;
};

/// Computes all indices on `window`. The welfare basis is raw ENG or ENG/W
/// depending on `normalization`.
WindowIndices compute_window_indices(std::span<const ClickEvent> window, int items, double theta,
                                     EngNormalization normalization,
                                     std::span<const double> psi_list);

/// The trailing `window` events of a run.
std::span<const ClickEvent> trailing_window(std::span<const ClickEvent> events, int window);

struct IndexStat {
    double mean = 0.0;
    double sd = 0.0;
    double band3se = 0.0;  // 3 sd / sqrt(runs)

    /// Half width of the normal-approximation 95% interval of the mean.
    double ci95(int runs) const noexcept;

    bool operator==(const IndexStat&) const = default;
};

/// Ensemble means and across-run standard deviations of every index.
struct IndexReport {
    int runs = 0;
    int window = 0;
    IndexStat eng;
    IndexStat eng_per_capita;
    IndexStat eng_L;
    IndexStat eng_R;
    IndexStat mis;
    IndexStat pol;
    IndexStat pol_gap;
    IndexStat hhi;
    std::vector<double> psi;
    std::vector<IndexStat> welfare;

    bool operator==(const IndexReport&) const = default;
};

/// Aggregates per-run indices in the given order (sample sd, n - 1).
IndexReport summarize(std::span<const WindowIndices> per_run, std::span<const double> psi_list);

IndexStat summarize_values(std::span<const double> values);

}  // namespace rankdyn
