#pragma once

#include <vector>

namespace lmem {

struct GaussLegendreRule {
    std::vector<double> nodes;   // on [-1, 1], ascending
    std::vector<double> weights; // sum to 2
};

// Nodes by Newton iteration on the Legendre recurrence; results for a given
// order are cached (immutable once built, safe to share across threads).
const GaussLegendreRule& gauss_legendre(int order);

// \int_a^b f dx with the rule mapped onto [a, b]
template <typename F>
double integrate_gl(const F& f, double a, double b, int order) {
    const GaussLegendreRule& rule = gauss_legendre(order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

} // namespace lmem
