#pragma once

#include <functional>
#include <span>
#include <vector>

namespace rankdyn {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    /// Computes an n-point rule by Newton iteration on P_n. Throws
    /// std::invalid_argument for n < 1.
    explicit GaussLegendre(int n);

    int size() const noexcept { return static_cast<int>(nodes.size()); }

    /// Integral of f over [a, b] with this rule.
    template <typename F>
    double integrate(F&& f, double a, double b) const {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
        return half * sum;
    }
};

struct QuadratureOptions {
    int nodes = 401;
    double half_width_sigmas = 6.0;
    double tolerance = 1e-8;
    int max_halvings = 6;
};

/// Integrates f over [a, b], split at the given interior breakpoints. Each
/// panel is checked against the sum over its two halves and subdivided until
/// they agree to `tolerance` (or max_halvings is reached).
class Integrator {
public:
    explicit Integrator(QuadratureOptions opts = {});

    double operator()(const std::function<double(double)>& f, double a, double b,
                      std::span<const double> breakpoints = {}) const;

    const QuadratureOptions& options() const noexcept { return opts_; }
    const GaussLegendre& rule() const noexcept { return rule_; }

private:
    double panel(const std::function<double(double)>& f, double a, double b, double whole,
                 int depth) const;

    QuadratureOptions opts_;
    GaussLegendre rule_;
};

}  // namespace rankdyn
