#ifndef VARREG_SAMPLED_HPP
#define VARREG_SAMPLED_HPP

#include <vector>

namespace varreg {

// Values on a uniform grid over [a, b], endpoints included. The grid size is
// odd and >= 257 so composite Simpson applies.
struct SampledFunction {
    SampledFunction(double a, double b, std::vector<double> values);
    SampledFunction(double a, double b, int size); // zero-filled

    double a, b;
    std::vector<double> values;

    int size() const { return static_cast<int>(values.size()); }
    double h() const { return (b - a) / (size() - 1); }
    double t(int i) const { return a + h() * i; }
    double sup_norm() const;
};

// m-fold cumulative composite-Simpson antiderivative, value 0 at t = a.
// Exact through cubics at even indices, through quadratics at odd ones.
SampledFunction iterated_antiderivative(const SampledFunction& h, int m);

} // namespace varreg

#endif
