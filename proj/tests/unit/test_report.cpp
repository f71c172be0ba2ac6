#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "rankdyn/report.hpp"
#include "rankdyn/sweep.hpp"

using namespace rankdyn;

namespace {

ModelConfig tiny_config() {
    ModelConfig cfg;
    cfg.N = 1500;
    cfg.T = 4;
    cfg.window = 300;
    return cfg;
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("rankdyn_unit_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("numbers are emitted with nine significant digits") {
    CHECK(format_sig9(1.0 / 3.0) == "0.333333333");
    CHECK(format_sig9(2.0) == "2");
    CHECK(round_sig9(1.0 / 3.0) == 0.333333333);
}

TEST_CASE("report rows survive CSV and JSON round trips") {
    const ModelConfig cfg = tiny_config();
    const EnsembleResult ens = run_ensemble(cfg);
    const auto rows = report_rows(cfg, ens.report, 123);
    const auto names = index_names(ens.report);
    REQUIRE(rows.size() == names.size());
    CHECK(names[6] == "pol_gap");
    CHECK(names.back() == "welfare_psi_1");
    CHECK(rows_from_csv(rows_to_csv(rows)) == rows);
    CHECK(rows_from_json(rows_to_json(rows)) == rows);
    CHECK(rows_to_csv(rows).rfind(std::string(kReportHeader), 0) == 0);

    const std::vector<ReportRow> none;
    CHECK(rows_to_csv(none) == std::string(kReportHeader) + "\n");
    CHECK(rows_from_csv(rows_to_csv(none)).empty());
    CHECK_THROWS_AS(rows_from_csv("eta,lambda\n1,2\n"), IoError);
}

TEST_CASE("per-run, histogram and event tables have their headers") {
    const ModelConfig cfg = tiny_config();
    const EnsembleResult ens = run_ensemble(cfg);
    const std::vector<double> psi{0.0, 0.5, 1.0};
    const std::string per_run = per_run_to_csv(ens.per_run, psi, cfg.master_seed);
    CHECK(per_run.rfind("run,run_seed,window,eng,", 0) == 0);
    CHECK(std::count(per_run.begin(), per_run.end(), '\n') == cfg.T + 1);

    const std::string hist = histogram_to_csv(ens.click_hist);
    CHECK(hist.rfind("bin_left,count,frequency", 0) == 0);
    CHECK(std::count(hist.begin(), hist.end(), '\n') == Histogram::kBins + 1);

    const RunResult run = run_once(cfg, 5);
    const std::string events = events_to_csv(run.events, 0, true);
    CHECK(events.rfind(std::string(kEventHeader), 0) == 0);
    CHECK(std::count(events.begin(), events.end(), '\n') == cfg.N + 1);
}

TEST_CASE("unwritable outputs raise IoError") {
    CHECK_THROWS_AS(write_text("/proc/rankdyn/none.csv", "x"), IoError);
    CHECK_THROWS_AS(read_text("/nonexistent/file.csv"), IoError);
    const auto dir = scratch_dir("write");
    write_text(dir / "a" / "b.txt", "hello");
    CHECK(read_text(dir / "a" / "b.txt") == "hello");
    write_config_echo(dir, tiny_config());
    CHECK(parse_config(read_text(dir / "config.json")) == tiny_config());
    write_manifest(dir, tiny_config(), "simulate");
    CHECK(std::filesystem::exists(dir / "manifest.json"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("sweeps cover the grid and a single cell equals a plain ensemble") {
    SweepSpec spec;
    spec.base = tiny_config();
    spec.eta_grid = {0.0, 10.0, 100.0};
    spec.lambda_grid = {0.5, 1.0};
    spec.modes = {NonFlatHighlight{}, FlatHighlight{0.5}};
    validate(spec);
    const SweepResult result = run_sweep(spec, 2);
    CHECK(result.cells.size() == 12);
    const std::size_t per_cell = index_names(result.cells.front().report).size();
    CHECK(result.rows().size() == 12 * per_cell);

    ModelConfig cfg = spec.base;
    cfg.eta = 10.0;
    cfg.lambda = 0.5;
    cfg.highlight_mode = FlatHighlight{0.5};
    const SweepCell& cell = result.at("Flat", 10.0, 0.5);
    CHECK(cell.cfg == cfg);
    CHECK(cell.report == run_ensemble(cfg).report);

    SweepSpec single = spec;
    single.eta_grid = {10.0};
    single.lambda_grid = {0.5};
    single.modes = {FlatHighlight{0.5}};
    const SweepResult one = run_sweep(single, 1);
    CHECK(one.rows() == report_rows(cfg, run_ensemble(cfg).report, one.cells.front().cell_seed));

    const auto dir = scratch_dir("sweep");
    write_sweep(dir, single, one);
    CHECK(rows_from_csv(read_text(dir / "sweep.csv")) == one.rows());
    std::filesystem::remove_all(dir);
}

TEST_CASE("sweep specifications are validated") {
    const char* bad[] = {
        R"({"eta_grid": []})",
        R"({"eta_grid": [1, 0]})",
        R"({"eta_grid": [-1, 0]})",
        R"({"lambda_grid": [0.5, 1.5]})",
        R"({"modes": []})",
        R"({"modes": ["Sloped"]})",
        R"({"psi_list": [2]})",
        R"({"figures": ["pie_chart"]})",
        R"({"grid": [1]})",
        R"({"base": {"eta": -1}})",
    };
    for (const char* text : bad) {
        INFO(text);
        CHECK_THROWS_AS(validate(parse_sweep_spec(text)), ConfigError);
    }
    const SweepSpec ok = parse_sweep_spec(
        R"({"eta_grid": [0, 100], "lambda_grid": [1], "modes": ["Flat", "NonFlat"], "figures": ["clicking_hist"]})");
    CHECK(ok.modes.size() == 2);
    CHECK(ok.wants_histograms());
    CHECK_THROWS_AS(load_sweep_spec("/nonexistent/sweep.json"), ConfigError);
}
