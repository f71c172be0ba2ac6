#pragma once

// (mode, eta, lambda) grid sweeps over ensembles.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankdyn/config.hpp"
#include "rankdyn/metrics.hpp"
#include "rankdyn/report.hpp"
#include "rankdyn/simulation.hpp"

namespace rankdyn {

enum class Figure {
    ClickingHist,
    HighlightingHist,
    EngSurface,
    PolSurface,
    MisSurface,
    HhiSurface,
    WelfareSurface,
    BenchmarkCompare,
};

std::string_view figure_name(Figure figure) noexcept;

struct SweepSpec {
    ModelConfig base;
    std::vector<double> eta_grid;
    std::vector<double> lambda_grid;
    std::vector<HighlightMode> modes;
    std::vector<double> psi_list{0.0, 0.5, 1.0};
    std::vector<Figure> figures;

    bool wants_histograms() const noexcept;
};

/// Throws ConfigError on empty or non-increasing grids, out-of-range values,
/// empty mode list or invalid psi.
void validate(const SweepSpec& spec);

/// JSON document with keys base (config object), eta_grid, lambda_grid,
/// modes ("Flat", "NonFlat" or mode objects), psi_list and figures. Bare
/// mode names take the base config's parameters when its mode matches.
SweepSpec parse_sweep_spec(std::string_view json_text);
SweepSpec load_sweep_spec(const std::filesystem::path& path);

struct SweepCell {
    ModelConfig cfg;
    std::uint64_t cell_seed = 0;
    IndexReport report;
    Histogram click_hist;
    Histogram highlight_hist;
    std::optional<std::string> error;
};

struct SweepResult {
    std::vector<SweepCell> cells;  // mode-major, then eta, then lambda

    std::vector<ReportRow> rows() const;
    const SweepCell& at(std::string_view mode, double eta, double lambda) const;
};

/// Every cell reuses base.master_seed, so all cells share random numbers.
/// A failing cell records its error and the sweep continues.
SweepResult run_sweep(const SweepSpec& spec, int threads,
                      const std::function<void(const SweepCell&)>& on_cell = {});

/// sweep.csv, sweep.json, failures.csv, config.json, manifest.json and, when
/// requested, per-cell histograms under histograms/.
void write_sweep(const std::filesystem::path& dir, const SweepSpec& spec,
                 const SweepResult& result);

}  // namespace rankdyn
