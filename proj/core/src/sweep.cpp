#include "rankdyn/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rankdyn {
namespace {

using nlohmann::json;

constexpr std::pair<Figure, std::string_view> kFigureNames[] = {
    {Figure::ClickingHist, "clicking_hist"},   {Figure::HighlightingHist, "highlighting_hist"},
    {Figure::EngSurface, "eng_surface"},       {Figure::PolSurface, "pol_surface"},
    {Figure::MisSurface, "mis_surface"},       {Figure::HhiSurface, "hhi_surface"},
    {Figure::WelfareSurface, "welfare_surface"}, {Figure::BenchmarkCompare, "benchmark_compare"},
};

std::vector<double> real_list(const json& root, const char* key, std::vector<double> fallback) {
    if (!root.contains(key)) return fallback;
    const json& node = root.at(key);
    if (!node.is_array()) throw ConfigError(std::string("'") + key + "' must be an array");
    std::vector<double> values;
    for (const json& v : node) {
        if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must contain numbers");
        values.push_back(v.get<double>());
    }
    return values;
}

void require_increasing(const std::vector<double>& grid, const char* name) {
    if (grid.empty()) throw ConfigError(std::string(name) + " is empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw ConfigError(std::string(name) + " must be strictly increasing");
        }
    }
}

std::string grid_label(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%g", v);
    return buffer;
}

std::string escape_csv(std::string text) {
    for (char& c : text) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return text;
}

}  // namespace

std::string_view figure_name(Figure figure) noexcept {
    for (const auto& [f, name] : kFigureNames) {
        if (f == figure) return name;
    }
    return "unknown";
}

bool SweepSpec::wants_histograms() const noexcept {
    for (Figure f : figures) {
        if (f == Figure::ClickingHist || f == Figure::HighlightingHist) return true;
    }
    return false;
}

void validate(const SweepSpec& spec) {
    validate(spec.base);
    require_increasing(spec.eta_grid, "eta_grid");
    require_increasing(spec.lambda_grid, "lambda_grid");
    if (spec.eta_grid.front() < 0.0) throw ConfigError("eta_grid values must be >= 0");
    if (spec.lambda_grid.front() < 0.0 || spec.lambda_grid.back() > 1.0) {
        throw ConfigError("lambda_grid values must lie in [0, 1]");
    }
    if (spec.modes.empty()) throw ConfigError("modes is empty");
    for (double psi : spec.psi_list) {
        if (!(psi >= 0.0 && psi <= 1.0)) throw ConfigError("psi_list values must lie in [0, 1]");
    }
    for (const HighlightMode& mode : spec.modes) {
        ModelConfig cfg = spec.base;
        cfg.highlight_mode = mode;
        validate(cfg);
    }
}

SweepSpec parse_sweep_spec(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed sweep JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("sweep spec must be a JSON object");
    for (const auto& [key, value] : root.items()) {
        static const std::vector<std::string> allowed{"base",  "eta_grid", "lambda_grid",
                                                      "modes", "psi_list", "figures"};
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError("unknown key '" + key + "' in sweep spec");
        }
    }

    SweepSpec spec;
    if (root.contains("base")) spec.base = parse_config(root["base"].dump());
    spec.eta_grid = real_list(root, "eta_grid", {spec.base.eta});
    spec.lambda_grid = real_list(root, "lambda_grid", {spec.base.lambda});
    spec.psi_list = real_list(root, "psi_list", spec.psi_list);

    if (!root.contains("modes")) {
        spec.modes.push_back(spec.base.highlight_mode);
    } else {
        if (!root["modes"].is_array()) throw ConfigError("'modes' must be an array");
        for (const json& m : root["modes"]) {
            if (m.is_string()) {
                const std::string name = m.get<std::string>();
                if (name != "Flat" && name != "NonFlat") {
                    throw ConfigError("unknown mode '" + name + "'");
                }
                if (mode_name(spec.base.highlight_mode) == name) {
                    spec.modes.push_back(spec.base.highlight_mode);
                } else if (name == "Flat") {
                    spec.modes.emplace_back(FlatHighlight{});
                } else {
                    spec.modes.emplace_back(NonFlatHighlight{});
                }
            } else {
                spec.modes.push_back(parse_highlight_mode(m.dump()));
            }
        }
    }

    if (root.contains("figures")) {
        if (!root["figures"].is_array()) throw ConfigError("'figures' must be an array");
        for (const json& f : root["figures"]) {
            if (!f.is_string()) throw ConfigError("'figures' must contain names");
            const std::string name = f.get<std::string>();
            bool found = false;
            for (const auto& [figure, figure_label] : kFigureNames) {
                if (figure_label == name) {
                    spec.figures.push_back(figure);
                    found = true;
                }
            }
            if (!found) throw ConfigError("unknown figure '" + name + "'");
        }
    }
    validate(spec);
    return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read sweep spec '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_sweep_spec(buffer.str());
}

std::vector<ReportRow> SweepResult::rows() const {
    std::vector<ReportRow> out;
    for (const SweepCell& cell : cells) {
        if (cell.error) continue;
        const auto rows = report_rows(cell.cfg, cell.report, cell.cell_seed);
        out.insert(out.end(), rows.begin(), rows.end());
    }
    return out;
}

const SweepCell& SweepResult::at(std::string_view mode, double eta, double lambda) const {
    for (const SweepCell& cell : cells) {
        if (mode_name(cell.cfg.highlight_mode) == mode && cell.cfg.eta == eta &&
            cell.cfg.lambda == lambda) {
            return cell;
        }
    }
    throw std::out_of_range("no sweep cell for " + std::string(mode) + " eta=" + grid_label(eta) +
                            " lambda=" + grid_label(lambda));
}

SweepResult run_sweep(const SweepSpec& spec, int threads,
                      const std::function<void(const SweepCell&)>& on_cell) {
    validate(spec);
    SweepResult result;
    EnsembleOptions opts;
    opts.threads = threads;
    opts.psi_list = spec.psi_list;
    opts.histograms = spec.wants_histograms();

    for (const HighlightMode& mode : spec.modes) {
        for (double eta : spec.eta_grid) {
            for (double lambda : spec.lambda_grid) {
                SweepCell cell;
                cell.cfg = spec.base;
                cell.cfg.highlight_mode = mode;
                cell.cfg.eta = eta;
                cell.cfg.lambda = lambda;
                cell.cell_seed = spec.base.master_seed;
                try {
                    EnsembleResult ensemble = run_ensemble(cell.cfg, opts);
                    cell.report = std::move(ensemble.report);
                    cell.click_hist = std::move(ensemble.click_hist);
                    cell.highlight_hist = std::move(ensemble.highlight_hist);
                } catch (const std::exception& e) {
                    cell.error = e.what();
                }
                if (on_cell) on_cell(cell);
                result.cells.push_back(std::move(cell));
            }
        }
    }
    return result;
}

void write_sweep(const std::filesystem::path& dir, const SweepSpec& spec,
                 const SweepResult& result) {
    const std::vector<ReportRow> rows = result.rows();
    write_text(dir / "sweep.csv", rows_to_csv(rows));
    write_text(dir / "sweep.json", rows_to_json(rows));
    write_config_echo(dir, spec.base);
    write_manifest(dir, spec.base, "sweep");

    std::string failures = "mode,eta,lambda,error\n";
    for (const SweepCell& cell : result.cells) {
        if (!cell.error) continue;
        failures += std::string(mode_name(cell.cfg.highlight_mode)) + ',' +
                    grid_label(cell.cfg.eta) + ',' + grid_label(cell.cfg.lambda) + ',' +
                    escape_csv(*cell.error) + '\n';
    }
    write_text(dir / "failures.csv", failures);

    if (!spec.wants_histograms()) return;
    for (const SweepCell& cell : result.cells) {
        if (cell.error) continue;
        const std::string stem = std::string(mode_name(cell.cfg.highlight_mode)) + "_eta" +
                                 grid_label(cell.cfg.eta) + "_lambda" + grid_label(cell.cfg.lambda);
        write_text(dir / "histograms" / (stem + "_clicks.csv"), histogram_to_csv(cell.click_hist));
        write_text(dir / "histograms" / (stem + "_highlights.csv"),
                   histogram_to_csv(cell.highlight_hist));
    }
}

}  // namespace rankdyn
