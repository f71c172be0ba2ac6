#include "rankdyn/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "rankdyn/simulation.hpp"

namespace rankdyn {
namespace {

double normal_pdf(double v, double mean, double sd) noexcept {
    const double z = (v - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

double normal_cdf(double v, double mean, double sd) noexcept {
    return 0.5 * std::erfc(-(v - mean) / (sd * std::numbers::sqrt2));
}

int sign_of(double v) noexcept { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

char sign_char(int s) noexcept { return s > 0 ? '+' : (s < 0 ? '-' : '0'); }

}  // namespace

RankCoefficients default_rank_coefficients(int items) noexcept {
    const double m = items;
    const double zeta1 = m * m / 4.0;
    return {(m + 1.0) / 2.0 + zeta1 / m, zeta1};
}

AnalyticModel::AnalyticModel(const ModelConfig& cfg, AnalyticOptions opts)
    : AnalyticModel(cfg, default_rank_coefficients(cfg.M), opts) {}

AnalyticModel::AnalyticModel(const ModelConfig& cfg, RankCoefficients zeta, AnalyticOptions opts)
    : cfg_(cfg), zeta_(zeta), opts_(opts), outer_(opts.outer), inner_(opts.inner_nodes) {
    gamma_bar_ = cfg_.gamma_bar();
    group_mass_[index_of(Group::L)] = normal_cdf(cfg_.theta_hat, cfg_.theta, cfg_.sigma_x);
    group_mass_[index_of(Group::R)] = 1.0 - group_mass_[index_of(Group::L)];

    mu_bar_ = integrate_items([this](double y) { return mu_H(y) * g(y); });
    for (Group grp : {Group::L, Group::R}) {
        rate_bar_[index_of(grp)] =
            integrate_items([this, grp](double y) { return group_rate(y, grp) * g(y); });
    }

    const double center = highlight_center();
    const auto mass = [this](double x) { return p_A(x) * f(x); };
    constexpr int kSteps = 600;
    const double step = 6.0 * cfg_.sigma_x / kSteps;
    int best = 0;
    for (int i = 1; i <= kSteps; ++i) {
        if (mass(center + i * step) > mass(center + best * step)) best = i;
    }
    double lo = center + std::max(0, best - 1) * step;
    double hi = center + std::min(kSteps, best + 1) * step;
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    while (hi - lo > 1e-10) {
        const double a = hi - ratio * (hi - lo);
        const double b = lo + ratio * (hi - lo);
        if (mass(a) < mass(b)) {
            lo = a;
        } else {
            hi = b;
        }
    }
    x_star_ = 0.5 * (lo + hi) - center;
}

double AnalyticModel::f(double x) const noexcept { return normal_pdf(x, cfg_.theta, cfg_.sigma_x); }

double AnalyticModel::g(double y) const noexcept { return normal_pdf(y, cfg_.theta, cfg_.sigma_y); }

double AnalyticModel::p_A(double x) const noexcept { return highlight_probability(x, cfg_); }

double AnalyticModel::highlight_center() const noexcept {
    if (const auto* mode = std::get_if<NonFlatHighlight>(&cfg_.highlight_mode)) {
        return mode->center == HighlightCenter::Benchmark ? cfg_.theta_hat : cfg_.theta;
    }
    return cfg_.theta;
}

double AnalyticModel::mu_H(double y) const {
    const double a = y - cfg_.sigma_x / 2.0;
    const double b = y + cfg_.sigma_x / 2.0;
    const double center = highlight_center();
    const auto integrand = [this](double x) { return p_A(x) * f(x); };
    if (center > a && center < b) {
        return inner_.integrate(integrand, a, center) + inner_.integrate(integrand, center, b);
    }
    return inner_.integrate(integrand, a, b);
}

double AnalyticModel::mu_H_group(double y, Group group) const {
    double a = y - cfg_.sigma_x / 2.0;
    double b = y + cfg_.sigma_x / 2.0;
    if (group == Group::L) {
        b = std::min(b, cfg_.theta_hat);
    } else {
        a = std::max(a, cfg_.theta_hat);
    }
    if (a >= b) return 0.0;
    const double center = highlight_center();
    const auto integrand = [this](double x) { return p_A(x) * f(x); };
    if (center > a && center < b) {
        return inner_.integrate(integrand, a, center) + inner_.integrate(integrand, center, b);
    }
    return inner_.integrate(integrand, a, b);
}

double AnalyticModel::mu_bar_fubini() const {
    const double half = cfg_.sigma_x / 2.0;
    const double breaks[] = {cfg_.theta, highlight_center()};
    const double width = opts_.outer.half_width_sigmas * cfg_.sigma_x;
    return outer_(
        [this, half](double x) {
            const double item_mass = normal_cdf(x + half, cfg_.theta, cfg_.sigma_y) -
                                     normal_cdf(x - half, cfg_.theta, cfg_.sigma_y);
            return p_A(x) * f(x) * item_mass;
        },
        cfg_.theta - width, cfg_.theta + width, breaks);
}

double AnalyticModel::group_mass(Group group) const noexcept { return group_mass_[index_of(group)]; }

double AnalyticModel::integrate_items(const std::function<double(double)>& h) const {
    const double half = cfg_.sigma_x / 2.0;
    const double center = highlight_center();
    const double breaks[] = {cfg_.theta,        cfg_.theta_hat,       cfg_.theta_hat - half,
                             cfg_.theta_hat + half, center - half, center + half};
    const double width = opts_.outer.half_width_sigmas * cfg_.sigma_y;
    return outer_(h, cfg_.theta - width, cfg_.theta + width, breaks);
}

double AnalyticModel::pi(double y) const {
    const double eta = cfg_.eta;
    const double mu = mu_H(y);
    return (1.0 + eta * mu) / (cfg_.M * (1.0 + eta * mu_bar_) + eta * (mu - mu_bar_));
}

double AnalyticModel::lambda_beta(double z) const noexcept {
    const double m = cfg_.M;
    const double log_beta = std::log(cfg_.beta);
    return (m + log_beta * (m - zeta_.zeta0 + zeta_.zeta1 * z)) /
           (m + log_beta * m * (m - 1.0) / 2.0);
}

double AnalyticModel::lambda_beta_slope() const noexcept {
    const double m = cfg_.M;
    const double log_beta = std::log(cfg_.beta);
    return zeta_.zeta1 * log_beta / (m + log_beta * m * (m - 1.0) / 2.0);
}

double AnalyticModel::lcd(double y) const { return lambda_beta(pi(y)) * g(y); }

double AnalyticModel::lhd(double y) const { return mu_H(y) * lcd(y); }

double AnalyticModel::expected_rank(double y) const { return zeta_.zeta0 - zeta_.zeta1 * pi(y); }

double AnalyticModel::group_rate(double y, Group group) const {
    const double mass = group_mass(group);
    return mass > 0.0 ? mu_H_group(y, group) / mass : 0.0;
}

PersonalizedPopularity AnalyticModel::personalized_popularity(double y, Group group) const {
    const double eta = cfg_.eta;
    const double lambda = cfg_.lambda;
    const double m = cfg_.M;
    const double own_rate = group_rate(y, group);
    const double other_rate = group_rate(y, other(group));
    const double own_bar = rate_bar_[index_of(group)];
    const double other_bar = rate_bar_[index_of(other(group))];
    const double denominator = m * (1.0 + eta * own_bar) + eta * (own_rate - own_bar) +
                               lambda * (m * (1.0 + eta * other_bar) + eta * (other_rate - other_bar));
    return {(1.0 + eta * own_rate) / denominator, lambda * (1.0 + eta * other_rate) / denominator};
}

double AnalyticModel::rank_argument(double y, Group group) const {
    const PersonalizedPopularity p = personalized_popularity(y, group);
    return p.own + p.other;
}

double AnalyticModel::expected_rank_personalized(double y, Group group) const {
    return zeta_.zeta0 - zeta_.zeta1 * rank_argument(y, group);
}

AnalyticIndices AnalyticModel::indices() const {
    AnalyticIndices out;
    out.eng = integrate_items([this](double y) {
        double total = 0.0;
        for (Group grp : {Group::L, Group::R}) {
            total += (group_mass(grp) + mu_H_group(y, grp)) * lambda_beta(rank_argument(y, grp));
        }
        return total * g(y);
    });
    out.mis = integrate_items([this](double y) {
        double total = 0.0;
        for (Group grp : {Group::L, Group::R}) {
            total += group_mass(grp) * lambda_beta(rank_argument(y, grp));
        }
        return std::abs(y - cfg_.theta) * total * g(y);
    });
    const double match = 2.0 * gamma_bar_;
    const double mismatch = 2.0 * (1.0 - gamma_bar_);
    out.pol = std::abs(integrate_items([&](double y) {
        const bool right_item = y >= cfg_.theta_hat;
        const double w_right = right_item ? match : mismatch;
        const double w_left = right_item ? mismatch : match;
        const double right = w_right * lambda_beta(rank_argument(y, Group::R));
        const double left = w_left * lambda_beta(rank_argument(y, Group::L));
        return y * (right - left) * g(y);
    }));
    return out;
}

AnalyticModel AnalyticModel::with_eta(double eta) const {
    ModelConfig cfg = cfg_;
    cfg.eta = eta;
    return AnalyticModel(cfg, zeta_, opts_);
}

AnalyticModel AnalyticModel::with_lambda(double lambda) const {
    ModelConfig cfg = cfg_;
    cfg.lambda = lambda;
    return AnalyticModel(cfg, zeta_, opts_);
}

AnalyticIndices analytic_indices(const AnalyticModel& model) { return model.indices(); }

std::vector<double> finite_differences(std::span<const double> grid,
                                       std::span<const double> values) {
    const std::size_t n = grid.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
        d[i] = (values[hi] - values[lo]) / (grid[hi] - grid[lo]);
    }
    return d;
}

SignTable comparative_statics_signs(const AnalyticModel& model, StaticsParameter parameter,
                                    std::span<const double> grid) {
    if (grid.size() < 5) throw std::invalid_argument("comparative statics need at least 5 grid points");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("grid must be strictly increasing");
    }

    SignTable table;
    table.parameter = parameter;
    table.grid.assign(grid.begin(), grid.end());
    for (double v : grid) {
        const AnalyticModel point =
            parameter == StaticsParameter::Eta ? model.with_eta(v) : model.with_lambda(v);
        table.values.push_back(point.indices());
    }

    if (parameter == StaticsParameter::Eta) {
        table.expected = model.config().is_flat() ? std::array<int, 3>{1, -1, -1}
                                                  : std::array<int, 3>{1, 1, 1};
    } else {
        table.expected = {-1, 0, -1};
    }

    std::array<std::vector<double>, 3> series;
    for (const AnalyticIndices& v : table.values) {
        series[0].push_back(v.eng);
        series[1].push_back(v.mis);
        series[2].push_back(v.pol);
    }
    std::array<std::vector<double>, 3> d;
    for (std::size_t k = 0; k < 3; ++k) d[k] = finite_differences(table.grid, series[k]);

    static constexpr const char* kNames[] = {"ENG", "MIS", "POL"};
    const char* param_name = parameter == StaticsParameter::Eta ? "eta" : "lambda";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        table.derivatives.push_back({d[0][i], d[1][i], d[2][i]});
        table.signs.push_back({sign_of(d[0][i]), sign_of(d[1][i]), sign_of(d[2][i])});
        for (std::size_t k = 0; k < 3; ++k) {
            if (table.expected[k] != 0 && table.signs[i][k] != table.expected[k]) {
                std::ostringstream msg;
                msg << "d" << kNames[k] << "/d" << param_name << " at " << param_name << "="
                    << grid[i] << ": expected " << sign_char(table.expected[k]) << ", got "
                    << sign_char(table.signs[i][k]);
                table.violations.push_back(msg.str());
            }
        }
    }
    return table;
}

RankFit fit_rank_bins(std::vector<RankBin> bins, int min_bins) {
    if (static_cast<int>(bins.size()) < min_bins) {
        throw FitError("only " + std::to_string(bins.size()) + " populated bins; need " +
                       std::to_string(min_bins));
    }
    const double n = static_cast<double>(bins.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const RankBin& b : bins) {
        mean_x += b.mean_popularity;
        mean_y += b.mean_rank;
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const RankBin& b : bins) {
        const double dx = b.mean_popularity - mean_x;
        const double dy = b.mean_rank - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 1e-24 * mean_x * mean_x * n)) {
        throw FitError("popularity has no spread across bins");
    }

    RankFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    fit.zeta0 = fit.intercept;
    fit.zeta1 = -fit.slope;
    fit.bins = std::move(bins);
    return fit;
}

RankFit fit_linear_rank(const ModelConfig& cfg, const FitProtocol& protocol) {
    ModelConfig run_cfg = cfg;
    run_cfg.T = protocol.runs;
    run_cfg.N = protocol.agents;
    run_cfg.M = protocol.items;
    run_cfg.window = std::min(cfg.window, protocol.agents);
    validate(run_cfg);

    std::optional<AnalyticModel> model;
    if (protocol.axis == RankAxis::AnalyticPi) model.emplace(run_cfg);

    const auto bins = static_cast<std::size_t>(protocol.bins);
    std::vector<double> sum_popularity(bins, 0.0);
    std::vector<double> sum_rank(bins, 0.0);
    std::vector<long long> count(bins, 0);
    const double left = run_cfg.theta - protocol.bins * protocol.bin_width / 2.0;

    EnsembleOptions opts;
    opts.threads = protocol.threads;
    opts.psi_list.clear();
    opts.on_run = [&](int, std::uint64_t, const RunResult& run) {
        const RankingState& state = run.final_state;
        std::array<double, 2> totals{};
        for (Group grp : {Group::L, Group::R}) {
            for (double k : state.kappa(grp)) totals[index_of(grp)] += k;
        }
        for (std::size_t m = 0; m < run.world.y.size(); ++m) {
            const double y = run.world.y[m];
            const double position = (y - left) / protocol.bin_width;
            if (!(position >= 0.0) || position >= protocol.bins) continue;
            const auto bin = static_cast<std::size_t>(position);

            double rank = 0.0;
            double share = 0.0;
            const int groups = state.shared() ? 1 : 2;
            for (int gi = 0; gi < groups; ++gi) {
                const Group grp = gi == 0 ? Group::L : Group::R;
                rank += state.ranks(grp)[m];
                const double total = totals[index_of(grp)];
                share += total > 0.0 ? state.kappa(grp)[m] / total : 0.0;
            }
            rank /= groups;
            share /= groups;
            sum_rank[bin] += rank;
            sum_popularity[bin] += model ? model->pi(y) : share;
            count[bin] += 1;
        }
    };
    run_ensemble(run_cfg, opts);

    std::vector<RankBin> populated;
    for (std::size_t b = 0; b < bins; ++b) {
        if (count[b] == 0) continue;
        const double n = static_cast<double>(count[b]);
        populated.push_back({left + (static_cast<double>(b) + 0.5) * protocol.bin_width,
                             sum_popularity[b] / n, sum_rank[b] / n, count[b]});
    }
    return fit_rank_bins(std::move(populated), protocol.min_populated_bins);
}

}  // namespace rankdyn
