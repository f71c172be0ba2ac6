#include "rankdyn/simulation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <optional>
#include <string>
#include <thread>

namespace rankdyn {
namespace {

constexpr std::array<ClickType, 3> kTypes{ClickType::Confirmatory, ClickType::Exploratory,
                                          ClickType::Indifferent};

// phi depends only on (type, sign) when every agent shares the benchmark.
class PhiTable {
public:
    PhiTable(const ItemSet& items, const ModelConfig& cfg) {
        for (std::size_t t = 0; t < kTypes.size(); ++t) {
            for (int side = 0; side < 2; ++side) {
                Agent stub;
                stub.click_type = kTypes[t];
                stub.sign = side == 0 ? -1 : 1;
                stub.theta_hat_n = cfg.theta_hat;
                table_[t][side] = propensity_absent_ranking(stub, items, cfg);
            }
        }
    }

    std::span<const double> at(const Agent& agent) const noexcept {
        return table_[static_cast<std::size_t>(agent.click_type)][agent.sign > 0 ? 1 : 0];
    }

private:
    std::array<std::array<std::vector<double>, 2>, 3> table_;
};

int sample_item(std::span<const double> weights, double total, double u) noexcept {
    const double target = u * total;
    double cumulative = 0.0;
    int last_positive = 0;
    for (std::size_t m = 0; m < weights.size(); ++m) {
        if (weights[m] <= 0.0) continue;
        cumulative += weights[m];
        last_positive = static_cast<int>(m);
        if (target < cumulative) return last_positive;
    }
    return last_positive;
}

WorldSummary summarize_world(const ItemSet& items) {
    return WorldSummary{items.y, items.m_minus, items.m_plus, items.theta_hat};
}

}  // namespace

RunResult run_from(const ModelConfig& cfg, const ItemSet& items, RankingState state,
                   std::uint64_t run_seed) {
    const int m = items.size();
    const AgentSource agents(cfg, run_seed);
    CounterStream ranking_stream(run_seed, StreamPurpose::Ranking, 1);

    std::vector<double> beta_pow(static_cast<std::size_t>(m));
    for (int r = 1; r <= m; ++r) beta_pow[r - 1] = std::pow(cfg.beta, m - r);

    const bool common = std::holds_alternative<CommonBenchmark>(cfg.benchmark_mode);
    std::optional<PhiTable> phi_table;
    if (common) phi_table.emplace(items, cfg);
    std::vector<double> phi_buffer(static_cast<std::size_t>(m));
    std::vector<double> weights(static_cast<std::size_t>(m));

    RunResult result{{}, state, summarize_world(items)};
    result.events.reserve(static_cast<std::size_t>(cfg.N));
    RankingState& ranking = result.final_state;

    for (int n = 0; n < cfg.N; ++n) {
        CounterStream s = agents.stream(static_cast<std::uint64_t>(n));
        const Agent agent = agents.draw(s);

        std::span<const double> phi;
        if (common) {
            phi = phi_table->at(agent);
        } else {
            propensity_absent_ranking(agent, items, cfg, phi_buffer);
            phi = phi_buffer;
        }

        const Group group = agent.group();
        const std::span<const int> ranks = ranking.ranks(group);
        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            weights[i] = beta_pow[ranks[i] - 1] * phi[i];
            total += weights[i];
        }
        const int item = sample_item(weights, total, s.uniform32());
        const double y = items.y[item];
        const bool highlighted = wants_highlight(agent, y, cfg.sigma_x);

        result.events.push_back(ClickEvent{n, group, static_cast<std::int16_t>(item), highlighted,
                                           static_cast<std::int16_t>(ranks[item]), y});
        ranking.record_outcome(group, item, highlighted, ranking_stream);
    }
    return result;
}

RunResult run_once(const ModelConfig& cfg, std::uint64_t run_seed) {
    const ItemSet items = sample_items(cfg, run_seed);
    CounterStream init_stream(run_seed, StreamPurpose::Ranking, 0);
    return run_from(cfg, items, RankingState::init(cfg, init_stream), run_seed);
}

void Histogram::add(double y) noexcept {
    const double position = (y - kLeft) / kWidth;
    if (!(position >= 0.0) || position >= kBins) return;
    counts[static_cast<std::size_t>(position)] += 1;
}

void Histogram::merge(const Histogram& other) noexcept {
    for (std::size_t b = 0; b < counts.size(); ++b) counts[b] += other.counts[b];
}

std::int64_t Histogram::total() const noexcept {
    std::int64_t sum = 0;
    for (std::int64_t c : counts) sum += c;
    return sum;
}

namespace {

struct RunOutput {
    WindowIndices indices;
    Histogram clicks;
    Histogram highlights;
    std::optional<RunResult> kept;
    std::exception_ptr error;
};

RunOutput execute_run(const ModelConfig& cfg, const EnsembleOptions& opts, int run_index) {
    RunOutput out;
    try {
        const std::uint64_t seed =
            derive_run_seed(cfg.master_seed, static_cast<std::uint64_t>(run_index));
        RunResult run = run_once(cfg, seed);
        const auto window = trailing_window(run.events, cfg.window);
        out.indices = compute_window_indices(window, cfg.M, cfg.theta, cfg.eng_normalization,
                                             opts.psi_list);
        if (opts.histograms) {
            for (const ClickEvent& ev : window) {
                out.clicks.add(ev.y);
                if (ev.highlighted) out.highlights.add(ev.y);
            }
        }
        if (opts.on_run) out.kept = std::move(run);
    } catch (...) {
        out.error = std::current_exception();
    }
    return out;
}

[[noreturn]] void rethrow_with_index(std::exception_ptr error, int run_index) {
    const std::string prefix = "run " + std::to_string(run_index) + ": ";
    try {
        std::rethrow_exception(error);
    } catch (const ConfigError& e) {
        throw ConfigError(prefix + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(prefix + e.what());
    } catch (...) {
        throw std::runtime_error(prefix + "unknown failure");
    }
}

}  // namespace

EnsembleResult run_ensemble(const ModelConfig& cfg, const EnsembleOptions& opts) {
    validate(cfg);
    const int threads = std::max(1, opts.threads);
    EnsembleResult result;
    result.per_run.reserve(static_cast<std::size_t>(cfg.T));

    std::vector<RunOutput> chunk;
    for (int start = 0; start < cfg.T; start += threads) {
        const int count = std::min(threads, cfg.T - start);
        chunk.assign(static_cast<std::size_t>(count), RunOutput{});
        if (count == 1) {
            chunk[0] = execute_run(cfg, opts, start);
        } else {
            std::vector<std::jthread> workers;
            workers.reserve(static_cast<std::size_t>(count));
            for (int k = 0; k < count; ++k) {
                workers.emplace_back([&, k] { chunk[k] = execute_run(cfg, opts, start + k); });
            }
        }
        for (int k = 0; k < count; ++k) {
            RunOutput& out = chunk[k];
            if (out.error) rethrow_with_index(out.error, start + k);
            result.per_run.push_back(std::move(out.indices));
            result.click_hist.merge(out.clicks);
            result.highlight_hist.merge(out.highlights);
            if (opts.on_run) {
                const auto seed = derive_run_seed(cfg.master_seed, static_cast<std::uint64_t>(start + k));
                opts.on_run(start + k, seed, *out.kept);
            }
        }
    }
    result.report = summarize(result.per_run, opts.psi_list);
    return result;
}

IndexReport run_variant_heterogeneous(const ModelConfig& cfg, const EnsembleOptions& opts) {
    if (!std::holds_alternative<HeterogeneousBenchmark>(cfg.benchmark_mode)) {
        throw ConfigError("heterogeneous variant requires a Heterogeneous benchmark mode");
    }
    return run_ensemble(cfg, opts).report;
}

IndexReport run_variant_noncentered(const ModelConfig& cfg, const EnsembleOptions& opts) {
    return run_ensemble(cfg, opts).report;
}

}  // namespace rankdyn
