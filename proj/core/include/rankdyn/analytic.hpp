#pragma once

// Limit theory of the click process: expected popularity absent ranking,
// the linearized click curve, limit clicking and highlighting densities,
// personalized popularity, the analytic indices and their comparative
// statics, and the linear rank fit against simulation.

#include <array>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankdyn/config.hpp"
#include "rankdyn/model.hpp"
#include "rankdyn/quadrature.hpp"

namespace rankdyn {

/// Coefficients of r(y) = zeta0 - zeta1 * popularity.
struct RankCoefficients {
    double zeta0 = 0.0;
    double zeta1 = 0.0;
};

/// Neutral coefficients: mean rank (M+1)/2 at popularity 1/M with slope
/// zeta1 = M^2 / 4.
RankCoefficients default_rank_coefficients(int items) noexcept;

struct AnalyticOptions {
    QuadratureOptions outer{};
    /// Node count of the inner rule over the highlight window |x - y| <= sigma_x/2.
    int inner_nodes = 61;
};

struct AnalyticIndices {
    double eng = 0.0;
    double mis = 0.0;
    double pol = 0.0;
};

struct PersonalizedPopularity {
    double own = 0.0;    // pi_g^g
    double other = 0.0;  // pi_g^{not g}
};

/// Evaluates the limit theory for one configuration. Agent signals have
/// density f = N(theta, sigma_x^2), item signals g = N(theta, sigma_y^2);
/// groups split the agents at theta_hat. Construction precomputes the mean
/// highlight propensities, so evaluations are const and reentrant.
class AnalyticModel {
public:
    /// Uses default_rank_coefficients(cfg.M).
    explicit AnalyticModel(const ModelConfig& cfg, AnalyticOptions opts = {});
    AnalyticModel(const ModelConfig& cfg, RankCoefficients zeta, AnalyticOptions opts = {});

    const ModelConfig& config() const noexcept { return cfg_; }
    RankCoefficients zeta() const noexcept { return zeta_; }
    double gamma_bar() const noexcept { return gamma_bar_; }
    /// Offset from the highlight center of the maximizer of p_A(x) f(x) on
    /// [center, center + 6 sigma_x].
    double x_star() const noexcept { return x_star_; }

    double f(double x) const noexcept;
    double g(double y) const noexcept;
    double p_A(double x) const noexcept;

    /// Integral of p_A f over [y - sigma_x/2, y + sigma_x/2].
    double mu_H(double y) const;
    /// mu_H restricted to the agents of `group` (unconditional mass), so
    /// mu_H_group(y, L) + mu_H_group(y, R) = mu_H(y).
    double mu_H_group(double y, Group group) const;
    /// Integral of mu_H g, computed as a nested integral.
    double mu_bar() const noexcept { return mu_bar_; }
    /// Same quantity via the swapped order: integral of p_A(x) f(x) times the
    /// item mass within sigma_x/2 of x.
    double mu_bar_fubini() const;
    /// Probability mass of a group's agents.
    double group_mass(Group group) const noexcept;

    /// Expected popularity absent ranking.
    double pi(double y) const;
    /// Affine click curve of the linear rank approximation.
    double lambda_beta(double z) const noexcept;
    double lambda_beta_slope() const noexcept;
    double lcd(double y) const;
    double lhd(double y) const;
    /// zeta0 - zeta1 * pi(y).
    double expected_rank(double y) const;

    /// Popularity shares seen in group g's ranking, built from the group's
    /// per-member highlight rate mu_H_group / group_mass.
    PersonalizedPopularity personalized_popularity(double y, Group group) const;
    /// Argument of group g's click curve: own + other. Equals pi(y) at
    /// lambda = 1 when theta_hat = theta.
    double rank_argument(double y, Group group) const;
    double expected_rank_personalized(double y, Group group) const;

    AnalyticIndices indices() const;

    /// Copies with one parameter changed and the same coefficients.
    AnalyticModel with_eta(double eta) const;
    AnalyticModel with_lambda(double lambda) const;

    /// Integrates h over the item support with the model's outer rule.
    double integrate_items(const std::function<double(double)>& h) const;

private:
    double group_rate(double y, Group group) const;
    double highlight_center() const noexcept;

    ModelConfig cfg_;
    RankCoefficients zeta_;
    AnalyticOptions opts_;
    Integrator outer_;
    GaussLegendre inner_;
    double gamma_bar_ = 0.0;
    double mu_bar_ = 0.0;
    std::array<double, 2> group_mass_{};
    std::array<double, 2> rate_bar_{};
    double x_star_ = 0.0;
};

/// Same as the member, exposed for tests and tooling.
AnalyticIndices analytic_indices(const AnalyticModel& model);

enum class StaticsParameter { Eta, Lambda };

/// Finite-difference signs of (ENG, MIS, POL) along a parameter grid.
struct SignTable {
    StaticsParameter parameter = StaticsParameter::Eta;
    std::vector<double> grid;
    std::vector<AnalyticIndices> values;
    std::vector<std::array<double, 3>> derivatives;
    std::vector<std::array<int, 3>> signs;
    /// Signs implied by the propositions; 0 where no claim is made.
    std::array<int, 3> expected{};
    std::vector<std::string> violations;

    bool consistent() const noexcept { return violations.empty(); }
};

/// Central differences on the (possibly nonuniform) grid, one-sided at the
/// ends. Violations of the expected signs are reported, not raised. Throws
/// std::invalid_argument for grids with fewer than 5 points or not strictly
/// increasing.
SignTable comparative_statics_signs(const AnalyticModel& model, StaticsParameter parameter,
                                    std::span<const double> grid);

/// Derivative estimates of `values` along `grid` with the stencil of
/// comparative_statics_signs.
std::vector<double> finite_differences(std::span<const double> grid,
                                       std::span<const double> values);

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RankAxis { EmpiricalShare, AnalyticPi };

struct FitProtocol {
    int runs = 1000;
    int agents = 5000;
    int items = 20;
    int bins = 81;
    double bin_width = 0.2;
    RankAxis axis = RankAxis::EmpiricalShare;
    int threads = 1;
    int min_populated_bins = 10;
};

struct RankBin {
    double y_center = 0.0;
    double mean_popularity = 0.0;
    double mean_rank = 0.0;
    long long count = 0;
};

struct RankFit {
    double zeta0 = 0.0;
    double zeta1 = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<RankBin> bins;  // populated bins only
};

/// Ordinary least squares of mean rank on mean popularity over the bins.
/// Throws FitError when fewer than `min_bins` bins are given or the
/// popularity values have no spread.
RankFit fit_rank_bins(std::vector<RankBin> bins, int min_bins = 10);

/// Simulates the protocol (cfg with T, M, N replaced), bins items by signal
/// and fits final rank against popularity. Empirical popularity is an item's
/// final share of total popularity (averaged over the two rankings when
/// lambda < 1); the analytic axis uses pi(y).
RankFit fit_linear_rank(const ModelConfig& cfg, const FitProtocol& protocol = {});

}  // namespace rankdyn
