#include "varreg/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace varreg {

namespace {

// Newton iteration on P_n from Chebyshev-like initial guesses; standard
// Golub-Welsch-free construction, accurate to ~1e-15.
GaussRule compute_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

} // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1 || n > 128) throw std::invalid_argument("gauss_legendre: order out of range");
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
    return it->second;
}

Quadrature::Quadrature(double a_, double b_, int panels_, int order_)
    : a(a_), b(b_), panels(panels_), order(order_) {
    if (!(a < b)) throw std::invalid_argument("Quadrature: requires a < b");
    if (panels < 1 || order < 1) throw std::invalid_argument("Quadrature: bad panel/order");
    const GaussRule& rule = gauss_legendre(order);
    points.reserve(static_cast<std::size_t>(panels) * order);
    weights.reserve(static_cast<std::size_t>(panels) * order);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        for (int k = 0; k < order; ++k) {
            points.push_back(mid + 0.5 * h * rule.nodes[static_cast<std::size_t>(k)]);
            weights.push_back(0.5 * h * rule.weights[static_cast<std::size_t>(k)]);
        }
    }
}

} // namespace varreg
