#include "rankdyn/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rankdyn {
namespace {

using nlohmann::json;

std::vector<std::string> split(std::string_view line, char separator) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = line.find(separator, start);
        fields.emplace_back(line.substr(start, end == std::string_view::npos ? line.npos : end - start));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return fields;
}

double parse_double(const std::string& field) {
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw IoError("not a number: '" + field + "'");
    }
}

template <typename Int>
Int parse_integer(const std::string& field) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw IoError("not an integer: '" + field + "'");
    }
    return v;
}

}  // namespace

std::string format_sig9(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.9g", v);
    return buffer;
}

double round_sig9(double v) {
    if (!std::isfinite(v)) return v;
    return std::stod(format_sig9(v));
}

std::vector<std::string> index_names(const IndexReport& report) {
    std::vector<std::string> names{"eng", "eng_per_capita", "eng_L", "eng_R", "mis", "pol", "pol_gap", "hhi"};
    for (double psi : report.psi) {
        char buffer[64];
        std::snprintf(buffer, sizeof buffer, "welfare_psi_%g", psi);
        names.emplace_back(buffer);
    }
    return names;
}

std::vector<ReportRow> report_rows(const ModelConfig& cfg, const IndexReport& report,
                                   std::uint64_t cell_seed) {
    std::vector<const IndexStat*> stats{&report.eng, &report.eng_per_capita, &report.eng_L,
                                        &report.eng_R, &report.mis, &report.pol, &report.pol_gap,
                                        &report.hhi};
    for (const IndexStat& w : report.welfare) stats.push_back(&w);
    const std::vector<std::string> names = index_names(report);

    std::vector<ReportRow> rows;
    for (std::size_t i = 0; i < stats.size(); ++i) {
        ReportRow row;
        row.eta = round_sig9(cfg.eta);
        row.lambda = round_sig9(cfg.lambda);
        row.mode = std::string(mode_name(cfg.highlight_mode));
        row.index_name = names[i];
        row.mean = round_sig9(stats[i]->mean);
        row.sd = round_sig9(stats[i]->sd);
        row.runs = report.runs;
        row.window = report.window;
        row.band3se = round_sig9(stats[i]->band3se);
        row.master_seed = cfg.master_seed;
        row.cell_seed = cell_seed;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string rows_to_csv(std::span<const ReportRow> rows) {
    std::string out(kReportHeader);
    out += '\n';
    for (const ReportRow& r : rows) {
        out += format_sig9(r.eta) + ',' + format_sig9(r.lambda) + ',' + r.mode + ',' +
               r.index_name + ',' + format_sig9(r.mean) + ',' + format_sig9(r.sd) + ',' +
               std::to_string(r.runs) + ',' + std::to_string(r.window) + ',' +
               format_sig9(r.band3se) + ',' + std::to_string(r.master_seed) + ',' +
               std::to_string(r.cell_seed) + '\n';
    }
    return out;
}

std::string rows_to_json(std::span<const ReportRow> rows) {
    json columns = json::array();
    for (const auto& name : split(kReportHeader, ',')) columns.push_back(name);
    json data = json::array();
    for (const ReportRow& r : rows) {
        data.push_back(json{{"eta", r.eta},
                            {"lambda", r.lambda},
                            {"mode", r.mode},
                            {"index_name", r.index_name},
                            {"mean", r.mean},
                            {"sd", r.sd},
                            {"runs", r.runs},
                            {"window", r.window},
                            {"band3se", r.band3se},
                            {"master_seed", r.master_seed},
                            {"cell_seed", r.cell_seed}});
    }
    return json{{"columns", columns}, {"rows", data}}.dump(2) + "\n";
}

std::vector<ReportRow> rows_from_csv(std::string_view text) {
    std::vector<ReportRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != kReportHeader) {
        throw IoError("report CSV header does not match the expected columns");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 11) throw IoError("report CSV row has " + std::to_string(f.size()) + " fields");
        ReportRow r;
        r.eta = parse_double(f[0]);
        r.lambda = parse_double(f[1]);
        r.mode = f[2];
        r.index_name = f[3];
        r.mean = parse_double(f[4]);
        r.sd = parse_double(f[5]);
        r.runs = parse_integer<int>(f[6]);
        r.window = parse_integer<int>(f[7]);
        r.band3se = parse_double(f[8]);
        r.master_seed = parse_integer<std::uint64_t>(f[9]);
        r.cell_seed = parse_integer<std::uint64_t>(f[10]);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<ReportRow> rows_from_json(std::string_view text) {
    std::vector<ReportRow> rows;
    try {
        const json root = json::parse(text);
        for (const json& r : root.at("rows")) {
            ReportRow row;
            row.eta = r.at("eta").get<double>();
            row.lambda = r.at("lambda").get<double>();
            row.mode = r.at("mode").get<std::string>();
            row.index_name = r.at("index_name").get<std::string>();
            row.mean = r.at("mean").get<double>();
            row.sd = r.at("sd").get<double>();
            row.runs = r.at("runs").get<int>();
            row.window = r.at("window").get<int>();
            row.band3se = r.at("band3se").get<double>();
            row.master_seed = r.at("master_seed").get<std::uint64_t>();
            row.cell_seed = r.at("cell_seed").get<std::uint64_t>();
            rows.push_back(std::move(row));
        }
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed report JSON: ") + e.what());
    }
    return rows;
}

std::string per_run_to_csv(std::span<const WindowIndices> per_run, std::span<const double> psi_list,
                           std::uint64_t master_seed) {
    IndexReport names_only;
    names_only.psi.assign(psi_list.begin(), psi_list.end());
    std::string out = "run,run_seed,window";
    for (const std::string& name : index_names(names_only)) out += ',' + name;
    out += '\n';
    for (std::size_t t = 0; t < per_run.size(); ++t) {
        const WindowIndices& w = per_run[t];
        out += std::to_string(t) + ',' + std::to_string(derive_run_seed(master_seed, t)) + ',' +
               std::to_string(w.window);
        for (double v : {w.eng, w.eng_per_capita, w.eng_L, w.eng_R, w.mis, w.pol, w.pol_gap, w.hhi}) {
            out += ',' + format_sig9(v);
        }
        for (double v : w.welfare) out += ',' + format_sig9(v);
        out += '\n';
    }
    return out;
}

std::string histogram_to_csv(const Histogram& hist) {
    std::string out = "bin_left,count,frequency\n";
    const std::int64_t total = hist.total();
    for (int b = 0; b < Histogram::kBins; ++b) {
        const std::int64_t c = hist.counts[static_cast<std::size_t>(b)];
        const double freq = total > 0 ? static_cast<double>(c) / static_cast<double>(total) : 0.0;
        out += format_sig9(round_sig9(Histogram::bin_left(b))) + ',' + std::to_string(c) + ',' +
               format_sig9(freq) + '\n';
    }
    return out;
}

std::string events_to_csv(std::span<const ClickEvent> events, int run_index, bool header) {
    std::string out;
    if (header) {
        out += kEventHeader;
        out += '\n';
    }
    char buffer[160];
    for (const ClickEvent& ev : events) {
        std::snprintf(buffer, sizeof buffer, "%d,%d,%s,%d,%.17g,%d,%d\n", run_index, ev.n,
                      ev.group == Group::L ? "L" : "R", ev.item, ev.y, ev.highlighted ? 1 : 0,
                      ev.rank_seen);
        out += buffer;
    }
    return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_config_echo(const std::filesystem::path& dir, const ModelConfig& cfg) {
    write_text(dir / "config.json", to_json(cfg));
}

void write_manifest(const std::filesystem::path& dir, const ModelConfig& cfg,
                    std::string_view command) {
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
    const json manifest{{"command", std::string(command)},
                        {"master_seed", cfg.master_seed},
                        {"config_hash", hash}};
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace rankdyn
