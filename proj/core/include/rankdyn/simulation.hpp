#pragma once

// The sequential N-agent process and its parallel ensembles.

#include <cstdint>
#include <functional>
#include <vector>

#include "rankdyn/config.hpp"
#include "rankdyn/metrics.hpp"
#include "rankdyn/model.hpp"
#include "rankdyn/ranking.hpp"

namespace rankdyn {

struct WorldSummary {
    std::vector<double> y;
    int m_minus = 0;
    int m_plus = 0;
    double theta_hat = 0.0;
};

struct RunResult {
    std::vector<ClickEvent> events;
    RankingState final_state;
    WorldSummary world;
};

/// Samples a world from `run_seed` and runs all cfg.N agents.
RunResult run_once(const ModelConfig& cfg, std::uint64_t run_seed);

/// Runs cfg.N agents against given items and an initial ranking state. Agent
/// and ranking streams are derived from `run_seed` exactly as in run_once.
RunResult run_from(const ModelConfig& cfg, const ItemSet& items, RankingState state,
                   std::uint64_t run_seed);

/// Counts of clicked (or highlighted) signals in bins of width 0.2 over
/// [-8, 8); values outside the range are not counted.
struct Histogram {
    static constexpr double kLeft = -8.0;
    static constexpr double kWidth = 0.2;
    static constexpr int kBins = 80;

    std::vector<std::int64_t> counts = std::vector<std::int64_t>(kBins, 0);

    void add(double y) noexcept;
    void merge(const Histogram& other) noexcept;
    std::int64_t total() const noexcept;
    static constexpr double bin_left(int bin) noexcept { return kLeft + kWidth * bin; }

    bool operator==(const Histogram&) const = default;
};

struct EnsembleOptions {
    int threads = 1;
    std::vector<double> psi_list{0.0, 0.5, 1.0};
    /// Build click and highlight histograms of each run's trailing window.
    bool histograms = false;
    /// Called once per run, in run-index order, from the calling thread.
    std::function<void(int run_index, std::uint64_t run_seed, const RunResult&)> on_run;
};

struct EnsembleResult {
    std::vector<WindowIndices> per_run;
    IndexReport report;
    Histogram click_hist;
    Histogram highlight_hist;
};

/// cfg.T runs with seeds derive_run_seed(cfg.master_seed, t). The result does
/// not depend on opts.threads. A failing run aborts the ensemble with an
/// exception naming the run index (ConfigError if the cause was one).
EnsembleResult run_ensemble(const ModelConfig& cfg, const EnsembleOptions& opts = {});

/// Ensemble with per-agent benchmarks; requires a Heterogeneous benchmark mode.
IndexReport run_variant_heterogeneous(const ModelConfig& cfg, const EnsembleOptions& opts = {});

/// Ensemble where signals center on theta while sorting uses theta_hat.
IndexReport run_variant_noncentered(const ModelConfig& cfg, const EnsembleOptions& opts = {});

}  // namespace rankdyn
