#include "rankdyn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rankdyn {

GaussLegendre::GaussLegendre(int n) {
    if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
    nodes.resize(static_cast<std::size_t>(n));
    weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double derivative = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            derivative = n * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / derivative;
            x -= step;
            if (std::abs(step) < 1e-16) break;
        }
        if (n == 1) {
            x = 0.0;
            derivative = 1.0;
        }
        const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

Integrator::Integrator(QuadratureOptions opts) : opts_(opts), rule_(opts.nodes) {}

double Integrator::operator()(const std::function<double(double)>& f, double a, double b,
                              std::span<const double> breakpoints) const {
    std::vector<double> cuts{a};
    for (double c : breakpoints) {
        if (c > a && c < b) cuts.push_back(c);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double whole = rule_.integrate(f, cuts[i], cuts[i + 1]);
        total += panel(f, cuts[i], cuts[i + 1], whole, 0);
    }
    return total;
}

double Integrator::panel(const std::function<double(double)>& f, double a, double b,
                         double whole, int depth) const {
    const double mid = 0.5 * (a + b);
    const double left = rule_.integrate(f, a, mid);
    const double right = rule_.integrate(f, mid, b);
    if (depth >= opts_.max_halvings || std::abs(left + right - whole) <= opts_.tolerance) {
        return left + right;
    }
    return panel(f, a, mid, left, depth + 1) + panel(f, mid, b, right, depth + 1);
}

}  // namespace rankdyn
