#include "rankdyn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rankdyn {

Engagement compute_eng(std::span<const ClickEvent> window) {
    Engagement e;
    for (const ClickEvent& ev : window) {
        const double units = ev.highlighted ? 2.0 : 1.0;
        (ev.group == Group::L ? e.eng_L : e.eng_R) += units;
    }
    e.eng = e.eng_L + e.eng_R;
    return e;
}

double compute_mis(std::span<const ClickEvent> window, double theta) {
    double total = 0.0;
    for (const ClickEvent& ev : window) total += std::abs(ev.y - theta);
    return total / static_cast<double>(window.size());
}

double compute_pol(std::span<const ClickEvent> window) {
    double right = 0.0;
    double left = 0.0;
    for (const ClickEvent& ev : window) (ev.group == Group::R ? right : left) += ev.y;
    return std::abs(right - left) / static_cast<double>(window.size());
}

double compute_pol_gap(std::span<const ClickEvent> window) {
    double sum[2] = {0.0, 0.0};
    double count[2] = {0.0, 0.0};
    for (const ClickEvent& ev : window) {
        const std::size_t g = index_of(ev.group);
        sum[g] += ev.y;
        count[g] += 1.0;
    }
    const auto mean = [&](std::size_t g) { return count[g] > 0.0 ? sum[g] / count[g] : 0.0; };
    return std::abs(mean(index_of(Group::R)) - mean(index_of(Group::L)));
}

double compute_hhi(std::span<const std::int64_t> clicks_per_item) {
    const auto total = std::accumulate(clicks_per_item.begin(), clicks_per_item.end(), std::int64_t{0});
    double hhi = 0.0;
    for (std::int64_t c : clicks_per_item) {
        const double share = 100.0 * static_cast<double>(c) / static_cast<double>(total);
        hhi += share * share;
    }
    return hhi;
}

double compute_wap(std::span<const double> vote_shares, std::span<const double> sympathy) {
    if (vote_shares.size() != sympathy.size()) {
        throw std::invalid_argument("vote shares and sympathy scores differ in length");
    }
    double share_total = 0.0;
    for (double v : vote_shares) {
        if (v < 0.0) throw std::invalid_argument("vote shares must be nonnegative");
        share_total += v;
    }
    if (share_total > 1.0 + 1e-9) throw std::invalid_argument("vote shares sum above 1");

    double mean = 0.0;
    for (std::size_t p = 0; p < vote_shares.size(); ++p) mean += vote_shares[p] * sympathy[p];
    double spread = 0.0;
    for (std::size_t p = 0; p < vote_shares.size(); ++p) {
        spread += vote_shares[p] * std::abs(sympathy[p] - mean);
    }
    return std::sqrt(spread);
}

std::span<const ClickEvent> trailing_window(std::span<const ClickEvent> events, int window) {
    const auto w = std::min(events.size(), static_cast<std::size_t>(window));
    return events.subspan(events.size() - w);
}

WindowIndices compute_window_indices(std::span<const ClickEvent> window, int items, double theta,
                                     EngNormalization normalization,
                                     std::span<const double> psi_list) {
    WindowIndices out;
    out.window = static_cast<int>(window.size());
    const Engagement e = compute_eng(window);
    out.eng = e.eng;
    out.eng_L = e.eng_L;
    out.eng_R = e.eng_R;
    out.eng_per_capita = e.eng / static_cast<double>(window.size());
    out.mis = compute_mis(window, theta);
    out.pol = compute_pol(window);
    out.pol_gap = compute_pol_gap(window);

    std::vector<std::int64_t> per_item(static_cast<std::size_t>(items), 0);
    for (const ClickEvent& ev : window) per_item[static_cast<std::size_t>(ev.item)] += 1;
    out.hhi = compute_hhi(per_item);

    const double basis = normalization == EngNormalization::Raw ? out.eng : out.eng_per_capita;
    out.welfare.reserve(psi_list.size());
    for (double psi : psi_list) out.welfare.push_back(compute_welfare(basis, out.mis, out.pol, psi));
    return out;
}

double IndexStat::ci95(int runs) const noexcept {
    return runs > 0 ? 1.959963984540054 * sd / std::sqrt(static_cast<double>(runs)) : 0.0;
}

IndexStat summarize_values(std::span<const double> values) {
    IndexStat stat;
    const auto n = static_cast<double>(values.size());
    if (values.empty()) return stat;
    double sum = 0.0;
    for (double v : values) sum += v;
    stat.mean = sum / n;
    if (values.size() > 1) {
        double squares = 0.0;
        for (double v : values) squares += (v - stat.mean) * (v - stat.mean);
        stat.sd = std::sqrt(squares / (n - 1.0));
    }
    stat.band3se = 3.0 * stat.sd / std::sqrt(n);
    return stat;
}

IndexReport summarize(std::span<const WindowIndices> per_run, std::span<const double> psi_list) {
    IndexReport report;
    report.runs = static_cast<int>(per_run.size());
    report.window = per_run.empty() ? 0 : per_run.front().window;
    report.psi.assign(psi_list.begin(), psi_list.end());

    std::vector<double> column(per_run.size());
    const auto stat_of = [&](auto field) {
        std::transform(per_run.begin(), per_run.end(), column.begin(), field);
        return summarize_values(column);
    };
    report.eng = stat_of([](const WindowIndices& w) { return w.eng; });
    report.eng_per_capita = stat_of([](const WindowIndices& w) { return w.eng_per_capita; });
    report.eng_L = stat_of([](const WindowIndices& w) { return w.eng_L; });
    report.eng_R = stat_of([](const WindowIndices& w) { return w.eng_R; });
    report.mis = stat_of([](const WindowIndices& w) { return w.mis; });
    report.pol = stat_of([](const WindowIndices& w) { return w.pol; });
    report.pol_gap = stat_of([](const WindowIndices& w) { return w.pol_gap; });
    report.hhi = stat_of([](const WindowIndices& w) { return w.hhi; });
    for (std::size_t k = 0; k < psi_list.size(); ++k) {
        report.welfare.push_back(stat_of([k](const WindowIndices& w) { return w.welfare.at(k); }));
    }
    return report;
}

}  // namespace rankdyn
