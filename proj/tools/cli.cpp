#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rankdyn/analytic.hpp"
#include "rankdyn/config.hpp"
#include "rankdyn/report.hpp"
#include "rankdyn/simulation.hpp"
#include "rankdyn/sweep.hpp"

namespace rankdyn::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::string out_dir = "out";
};

ModelConfig resolve_config(const Globals& g, std::ostream& err, std::optional<int> runs = {}) {
    ModelConfig cfg = g.config.empty() ? ModelConfig{} : load_config(g.config);
    if (runs) cfg.T = *runs;
    if (g.seed) cfg.master_seed = *g.seed;
    for (const std::string& warning : validate(cfg)) err << "warning: " << warning << '\n';
    return cfg;
}

std::string join_csv(std::initializer_list<std::string> fields) {
    std::string line;
    for (const std::string& f : fields) {
        if (!line.empty()) line += ',';
        line += f;
    }
    return line + '\n';
}

// simulate ------------------------------------------------------------------

struct SimulateArgs {
    std::optional<int> runs;
    std::string out_csv;
    std::string emit_events = "off";
    bool histograms = false;
    std::vector<double> psi{0.0, 0.5, 1.0};
};

void run_simulate(const Globals& g, const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    const ModelConfig cfg = resolve_config(g, err, a.runs);
    const fs::path dir = g.out_dir;
    const bool emit_events = a.emit_events != "off";

    std::ofstream events;
    EnsembleOptions opts;
    opts.threads = g.threads;
    opts.psi_list = a.psi;
    opts.histograms = a.histograms;
    if (emit_events) {
        const fs::path path = a.emit_events;
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        events.open(path, std::ios::binary | std::ios::trunc);
        if (!events) throw IoError("cannot write '" + path.string() + "'");
        opts.on_run = [&events](int run_index, std::uint64_t, const RunResult& run) {
            events << events_to_csv(run.events, run_index, run_index == 0);
        };
    }

    const EnsembleResult result = run_ensemble(cfg, opts);
    if (emit_events && !events.flush()) throw IoError("failed writing '" + a.emit_events + "'");

    const auto rows = report_rows(cfg, result.report, cfg.master_seed);
    write_text(a.out_csv.empty() ? dir / "report.csv" : fs::path(a.out_csv), rows_to_csv(rows));
    write_text(dir / "report.json", rows_to_json(rows));
    write_text(dir / "per_run.csv", per_run_to_csv(result.per_run, a.psi, cfg.master_seed));
    if (a.histograms) {
        write_text(dir / "histograms" / "clicks.csv", histogram_to_csv(result.click_hist));
        write_text(dir / "histograms" / "highlights.csv", histogram_to_csv(result.highlight_hist));
    }
    write_config_echo(dir, cfg);
    write_manifest(dir, cfg, "simulate");

    const IndexReport& r = result.report;
    out << "runs " << r.runs << " window " << r.window << '\n'
        << "ENG " << format_sig9(r.eng.mean) << " (sd " << format_sig9(r.eng.sd) << ")\n"
        << "MIS " << format_sig9(r.mis.mean) << " (sd " << format_sig9(r.mis.sd) << ")\n"
        << "POL " << format_sig9(r.pol.mean) << " (sd " << format_sig9(r.pol.sd) << ")\n"
        << "POL gap " << format_sig9(r.pol_gap.mean) << " (sd " << format_sig9(r.pol_gap.sd)
        << ")\n"
        << "HHI " << format_sig9(r.hhi.mean) << " (sd " << format_sig9(r.hhi.sd) << ")\n"
        << "wrote " << dir.string() << '\n';
}

// sweep ---------------------------------------------------------------------

void run_sweep_command(const Globals& g, const std::string& spec_path, std::ostream& out,
                       std::ostream& err) {
    SweepSpec spec = load_sweep_spec(spec_path);
    if (!g.config.empty()) spec.base = load_config(g.config);
    if (g.seed) spec.base.master_seed = *g.seed;
    validate(spec);
    for (const std::string& warning : validate(spec.base)) err << "warning: " << warning << '\n';

    const std::size_t total = spec.modes.size() * spec.eta_grid.size() * spec.lambda_grid.size();
    std::size_t done = 0;
    const SweepResult result = run_sweep(spec, g.threads, [&](const SweepCell& cell) {
        ++done;
        err << "cell " << done << '/' << total << ' ' << mode_name(cell.cfg.highlight_mode)
            << " eta=" << cell.cfg.eta << " lambda=" << cell.cfg.lambda
            << (cell.error ? " failed: " + *cell.error : std::string()) << '\n';
    });
    write_sweep(g.out_dir, spec, result);

    const auto failed = std::count_if(result.cells.begin(), result.cells.end(),
                                      [](const SweepCell& c) { return c.error.has_value(); });
    out << "cells " << result.cells.size() << " failed " << failed << '\n'
        << "wrote " << g.out_dir << '\n';
}

// analytic ------------------------------------------------------------------

struct AnalyticArgs {
    double y_min = -10.0;
    double y_max = 10.0;
    double y_step = 0.1;
    std::optional<double> zeta0;
    std::optional<double> zeta1;
    bool zeta_from_fit = false;
    int fit_runs = 1000;
    int fit_agents = 5000;
    std::string statics;
    std::vector<double> grid;
};

void run_analytic(const Globals& g, const AnalyticArgs& a, std::ostream& out, std::ostream& err) {
    const ModelConfig cfg = resolve_config(g, err);
    if (!(a.y_step > 0.0) || !(a.y_max > a.y_min)) {
        throw ConfigError("y grid needs y-max > y-min and y-step > 0");
    }
    if (a.zeta0.has_value() != a.zeta1.has_value()) {
        throw ConfigError("--zeta0 and --zeta1 must be given together");
    }
    if (a.zeta_from_fit && a.zeta0) throw ConfigError("--zeta-from-fit excludes --zeta0/--zeta1");

    RankCoefficients zeta = default_rank_coefficients(cfg.M);
    std::optional<RankFit> fit;
    if (a.zeta0) {
        zeta = {*a.zeta0, *a.zeta1};
    } else if (a.zeta_from_fit) {
        FitProtocol protocol;
        protocol.runs = a.fit_runs;
        protocol.agents = a.fit_agents;
        protocol.items = cfg.M;
        protocol.threads = g.threads;
        fit = fit_linear_rank(cfg, protocol);
        zeta = {fit->zeta0, fit->zeta1};
    }
    if (!(zeta.zeta1 > 0.0)) throw ConfigError("zeta1 must be positive");

    const AnalyticModel model(cfg, zeta);
    const fs::path dir = g.out_dir;

    std::string table = "y,g,mu_H,pi,expected_rank,lcd,lhd,rank_L,rank_R\n";
    const int steps = static_cast<int>(std::floor((a.y_max - a.y_min) / a.y_step + 1e-9));
    for (int i = 0; i <= steps; ++i) {
        const double y = a.y_min + i * a.y_step;
        table += join_csv({format_sig9(round_sig9(y)), format_sig9(model.g(y)),
                           format_sig9(model.mu_H(y)), format_sig9(model.pi(y)),
                           format_sig9(model.expected_rank(y)), format_sig9(model.lcd(y)),
                           format_sig9(model.lhd(y)),
                           format_sig9(model.expected_rank_personalized(y, Group::L)),
                           format_sig9(model.expected_rank_personalized(y, Group::R))});
    }
    write_text(dir / "analytic.csv", table);

    const AnalyticIndices idx = model.indices();
    json summary{{"eng", round_sig9(idx.eng)},
                 {"mis", round_sig9(idx.mis)},
                 {"pol", round_sig9(idx.pol)},
                 {"x_star", round_sig9(model.x_star())},
                 {"mu_bar", round_sig9(model.mu_bar())},
                 {"gamma_bar", round_sig9(model.gamma_bar())},
                 {"zeta0", round_sig9(zeta.zeta0)},
                 {"zeta1", round_sig9(zeta.zeta1)}};
    if (fit) summary["fit_r_squared"] = round_sig9(fit->r_squared);

    if (!a.statics.empty()) {
        const StaticsParameter parameter =
            a.statics == "eta" ? StaticsParameter::Eta : StaticsParameter::Lambda;
        std::vector<double> grid = a.grid;
        if (grid.empty()) {
            grid = parameter == StaticsParameter::Eta ? std::vector<double>{0, 1, 10, 50, 100}
                                                      : std::vector<double>{0, 0.25, 0.5, 0.75, 1};
        }
        SignTable table_signs;
        try {
            table_signs = comparative_statics_signs(model, parameter, grid);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        std::string statics = "parameter,value,eng,mis,pol,d_eng,d_mis,d_pol,sign_eng,sign_mis,sign_pol\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto& v = table_signs.values[i];
            const auto& d = table_signs.derivatives[i];
            const auto& s = table_signs.signs[i];
            statics += join_csv({a.statics, format_sig9(grid[i]), format_sig9(v.eng),
                                 format_sig9(v.mis), format_sig9(v.pol), format_sig9(d[0]),
                                 format_sig9(d[1]), format_sig9(d[2]), std::to_string(s[0]),
                                 std::to_string(s[1]), std::to_string(s[2])});
        }
        write_text(dir / "statics.csv", statics);
        summary["statics_consistent"] = table_signs.consistent();
        summary["statics_violations"] = table_signs.violations;
        for (const std::string& v : table_signs.violations) out << "sign violation: " << v << '\n';
    }
    write_text(dir / "analytic.json", summary.dump(2) + "\n");
    write_config_echo(dir, cfg);
    write_manifest(dir, cfg, "analytic");

    out << "ENG " << format_sig9(idx.eng) << " MIS " << format_sig9(idx.mis) << " POL "
        << format_sig9(idx.pol) << " x* " << format_sig9(model.x_star()) << '\n'
        << "wrote " << dir.string() << '\n';
}

// fit-rank ------------------------------------------------------------------

struct FitArgs {
    int runs = 1000;
    int agents = 5000;
    int items = 20;
    std::string axis = "empirical";
};

void run_fit(const Globals& g, const FitArgs& a, std::ostream& out, std::ostream& err) {
    const ModelConfig cfg = resolve_config(g, err);
    FitProtocol protocol;
    protocol.runs = a.runs;
    protocol.agents = a.agents;
    protocol.items = a.items;
    protocol.axis = a.axis == "analytic" ? RankAxis::AnalyticPi : RankAxis::EmpiricalShare;
    protocol.threads = g.threads;
    const RankFit fit = fit_linear_rank(cfg, protocol);

    const fs::path dir = g.out_dir;
    std::string bins = "y_center,mean_popularity,mean_rank,count\n";
    for (const RankBin& b : fit.bins) {
        bins += join_csv({format_sig9(round_sig9(b.y_center)), format_sig9(b.mean_popularity),
                          format_sig9(b.mean_rank), std::to_string(b.count)});
    }
    write_text(dir / "rank_fit.csv", bins);
    const json summary{{"axis", a.axis},
                       {"zeta0", round_sig9(fit.zeta0)},
                       {"zeta1", round_sig9(fit.zeta1)},
                       {"slope", round_sig9(fit.slope)},
                       {"intercept", round_sig9(fit.intercept)},
                       {"r_squared", round_sig9(fit.r_squared)},
                       {"bins", fit.bins.size()}};
    write_text(dir / "rank_fit.json", summary.dump(2) + "\n");
    write_config_echo(dir, cfg);
    write_manifest(dir, cfg, "fit-rank");
    out << "zeta0 " << format_sig9(fit.zeta0) << " zeta1 " << format_sig9(fit.zeta1) << " R2 "
        << format_sig9(fit.r_squared) << '\n'
        << "wrote " << dir.string() << '\n';
}

// variants ------------------------------------------------------------------

struct VariantArgs {
    std::string kind;
    std::vector<double> eta_grid{0, 1, 10, 50, 100};
    std::optional<double> sigma_theta_hat;
    double theta = 6.0;
    double theta_hat = 0.0;
};

void run_variants(const Globals& g, const VariantArgs& a, std::ostream& out, std::ostream& err) {
    const ModelConfig base = resolve_config(g, err);
    ModelConfig reference = base;
    ModelConfig variant = base;
    std::string reference_label;
    if (a.kind == "heterogeneous") {
        const double spread = a.sigma_theta_hat.value_or(std::min(base.sigma_x, base.sigma_y) / 4.0);
        variant.benchmark_mode = HeterogeneousBenchmark{spread};
        reference.benchmark_mode = CommonBenchmark{};
        reference_label = "common";
    } else {
        variant.theta = a.theta;
        variant.theta_hat = a.theta_hat;
        reference.theta = base.theta_hat;
        reference_label = "centered";
    }
    for (const std::string& warning : validate(variant)) err << "warning: " << warning << '\n';

    EnsembleOptions opts;
    opts.threads = g.threads;
    std::string csv = "variant,eta,index_name,mean,sd,runs,ci95\n";
    const auto emit = [&](const std::string& label, double eta, const IndexReport& r) {
        const std::pair<const char*, const IndexStat*> stats[] = {
            {"eng", &r.eng}, {"mis", &r.mis}, {"pol", &r.pol}, {"pol_gap", &r.pol_gap},
            {"hhi", &r.hhi}};
        for (const auto& [name, stat] : stats) {
            csv += join_csv({label, format_sig9(eta), name, format_sig9(stat->mean),
                             format_sig9(stat->sd), std::to_string(r.runs),
                             format_sig9(stat->ci95(r.runs))});
        }
    };
    for (double eta : a.eta_grid) {
        reference.eta = eta;
        variant.eta = eta;
        emit(reference_label, eta, run_ensemble(reference, opts).report);
        const IndexReport vr = a.kind == "heterogeneous" ? run_variant_heterogeneous(variant, opts)
                                                         : run_variant_noncentered(variant, opts);
        emit(a.kind, eta, vr);
        err << a.kind << " eta=" << eta << " done\n";
    }
    const fs::path dir = g.out_dir;
    write_text(dir / "benchmark_compare.csv", csv);
    write_config_echo(dir, variant);
    write_manifest(dir, variant, "variants " + a.kind);
    out << "wrote " << dir.string() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Popularity ranking simulator with highlighting and personalization"};
    app.require_subcommand(1);
    Globals g;
    std::uint64_t seed = 0;
    app.add_option("--config", g.config, "Model configuration JSON")->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the config)");
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out-dir", g.out_dir, "Output directory");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run one T-run ensemble");
    simulate->add_option("--runs", sim.runs, "Ensemble size T (overrides the config)")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--out", sim.out_csv, "Report CSV path (default <out-dir>/report.csv)");
    simulate->add_option("--emit-events", sim.emit_events, "Event log CSV path, or off");
    simulate->add_flag("--histograms", sim.histograms, "Write click and highlight histograms");
    simulate->add_option("--psi", sim.psi, "Welfare weights")->delimiter(',');

    std::string spec_path;
    auto* sweep = app.add_subcommand("sweep", "Run a (mode, eta, lambda) grid");
    sweep->add_option("--spec", spec_path, "Sweep specification JSON")
        ->required()
        ->check(CLI::ExistingFile);

    AnalyticArgs an;
    auto* analytic = app.add_subcommand("analytic", "Tabulate the limit theory on a y grid");
    analytic->add_option("--y-min", an.y_min);
    analytic->add_option("--y-max", an.y_max);
    analytic->add_option("--y-step", an.y_step);
    analytic->add_option("--zeta0", an.zeta0, "Rank intercept");
    analytic->add_option("--zeta1", an.zeta1, "Rank slope");
    analytic->add_flag("--zeta-from-fit", an.zeta_from_fit, "Fit the rank coefficients first");
    analytic->add_option("--fit-runs", an.fit_runs)->check(CLI::PositiveNumber);
    analytic->add_option("--fit-agents", an.fit_agents)->check(CLI::PositiveNumber);
    analytic->add_option("--statics", an.statics, "Comparative statics along eta or lambda")
        ->check(CLI::IsMember({"eta", "lambda"}));
    analytic->add_option("--grid", an.grid, "Comparative statics grid")->delimiter(',');

    FitArgs fit;
    auto* fit_rank = app.add_subcommand("fit-rank", "Fit final rank against popularity");
    fit_rank->add_option("--runs", fit.runs)->check(CLI::PositiveNumber);
    fit_rank->add_option("--agents", fit.agents)->check(CLI::PositiveNumber);
    fit_rank->add_option("--items", fit.items)->check(CLI::Range(2, 10000));
    fit_rank->add_option("--axis", fit.axis)->check(CLI::IsMember({"empirical", "analytic"}));

    VariantArgs var;
    auto* variants = app.add_subcommand("variants", "Benchmark robustness variants over eta");
    variants->add_option("--kind", var.kind)
        ->required()
        ->check(CLI::IsMember({"heterogeneous", "noncentered"}));
    variants->add_option("--eta-grid", var.eta_grid)->delimiter(',');
    variants->add_option("--sigma-theta-hat", var.sigma_theta_hat);
    variants->add_option("--theta", var.theta);
    variants->add_option("--theta-hat", var.theta_hat);

    for (CLI::App* sub : {simulate, sweep, analytic, fit_rank, variants}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }
    if (seed_opt->count() > 0) g.seed = seed;

    try {
        if (*simulate) run_simulate(g, sim, out, err);
        if (*sweep) run_sweep_command(g, spec_path, out, err);
        if (*analytic) run_analytic(g, an, out, err);
        if (*fit_rank) run_fit(g, fit, out, err);
        if (*variants) run_variants(g, var, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace rankdyn::cli
