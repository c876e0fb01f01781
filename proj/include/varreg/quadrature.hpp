#ifndef VARREG_QUADRATURE_HPP
#define VARREG_QUADRATURE_HPP

#include <vector>

namespace varreg {

// Gauss-Legendre nodes/weights on [-1, 1]; cached and thread-safe.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n);

// Composite Gauss-Legendre rule on [a, b]: `panels` panels of `order` nodes,
// flattened panel-major. Sum of weights equals b - a to rounding.
struct Quadrature {
    Quadrature(double a, double b, int panels, int order);

    double a, b;
    int panels, order;
    std::vector<double> points;
    std::vector<double> weights;

    template <typename F>
    double integrate(F&& f) const {
        // fixed left-to-right accumulation
        double acc = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) acc += weights[i] * f(points[i]);
        return acc;
    }
};

} // namespace varreg

#endif
