#pragma once

// Tabular output: index rows as CSV and a JSON mirror, histogram and event
// log files, config echo and run manifest.

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rankdyn/config.hpp"
#include "rankdyn/metrics.hpp"
#include "rankdyn/simulation.hpp"

namespace rankdyn {

/// Raised when an output path cannot be written or an input table is malformed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ReportRow {
    double eta = 0.0;
    double lambda = 0.0;
    std::string mode;
    std::string index_name;
    double mean = 0.0;
    double sd = 0.0;
    int runs = 0;
    int window = 0;
    double band3se = 0.0;
    std::uint64_t master_seed = 0;
    std::uint64_t cell_seed = 0;

    bool operator==(const ReportRow&) const = default;
};

inline constexpr std::string_view kReportHeader =
    "eta,lambda,mode,index_name,mean,sd,runs,window,band3se,master_seed,cell_seed";

/// Rounds to the 9 significant digits used in every emitted table.
double round_sig9(double v);

/// "%.9g" text of v, the number format of every emitted table.
std::string format_sig9(double v);

/// Index names in emission order: eng, eng_per_capita, eng_L, eng_R, mis, pol,
/// pol_gap, hhi, then welfare_psi_<psi> per entry of the report's psi list.
std::vector<std::string> index_names(const IndexReport& report);

/// One row per index, values rounded with round_sig9.
std::vector<ReportRow> report_rows(const ModelConfig& cfg, const IndexReport& report,
                                   std::uint64_t cell_seed);

std::string rows_to_csv(std::span<const ReportRow> rows);
std::string rows_to_json(std::span<const ReportRow> rows);
std::vector<ReportRow> rows_from_csv(std::string_view text);
std::vector<ReportRow> rows_from_json(std::string_view text);

/// One row per run: run, run_seed, window, then every index in index_names
/// order.
std::string per_run_to_csv(std::span<const WindowIndices> per_run, std::span<const double> psi_list,
                           std::uint64_t master_seed);

/// bin_left,count,frequency per bin.
std::string histogram_to_csv(const Histogram& hist);

inline constexpr std::string_view kEventHeader = "run,n,group,item,y,highlighted,rank_seen";
std::string events_to_csv(std::span<const ClickEvent> events, int run_index, bool header);

/// Writes text to path, creating parent directories. Throws IoError naming
/// the path on failure.
void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

/// config.json (resolved config) and manifest.json (seed and config hash).
void write_config_echo(const std::filesystem::path& dir, const ModelConfig& cfg);
void write_manifest(const std::filesystem::path& dir, const ModelConfig& cfg,
                    std::string_view command);

}  // namespace rankdyn
