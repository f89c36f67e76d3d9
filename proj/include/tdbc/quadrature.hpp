#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace tdbc {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

GaussLegendreRule gauss_legendre(std::size_t n);

/// Applies the rule on [a, b]. F returns anything closed under + and scalar *.
template <class F>
auto integrate(const GaussLegendreRule& rule, double a, double b, F&& f) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    using R = decltype(f(mid));
    R acc{};
    for (std::size_t i = 0; i < rule.size(); ++i) {
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return half * acc;
}

struct AdaptiveResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod (61 points) on [a, b] to relative tolerance rel_tol.
AdaptiveResult adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol = 1e-13);

}  // namespace tdbc
