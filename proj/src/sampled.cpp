#include "varreg/sampled.hpp"

#include <cmath>
#include <stdexcept>

namespace varreg {

namespace {
void check_grid(double a, double b, std::size_t n) {
    if (!(a < b)) throw std::invalid_argument("SampledFunction: requires a < b");
    if (n < 257 || n % 2 == 0)
        throw std::invalid_argument("SampledFunction: grid size must be odd and >= 257, got " +
                                    std::to_string(n));
}
} // namespace

SampledFunction::SampledFunction(double a_, double b_, std::vector<double> values_)
    : a(a_), b(b_), values(std::move(values_)) {
    check_grid(a, b, values.size());
}

SampledFunction::SampledFunction(double a_, double b_, int size_)
    : a(a_), b(b_), values(static_cast<std::size_t>(size_), 0.0) {
    check_grid(a, b, values.size());
}

double SampledFunction::sup_norm() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

SampledFunction iterated_antiderivative(const SampledFunction& h, int m) {
    if (m < 0) throw std::invalid_argument("iterated_antiderivative: m must be >= 0");
    SampledFunction out = h;
    const double step = h.h();
    for (int pass = 0; pass < m; ++pass) {
        const std::vector<double> v = out.values;
        const int M = static_cast<int>(v.size());
        std::vector<double>& I = out.values;
        I[0] = 0.0;
        for (int i = 2; i < M; i += 2)
            I[static_cast<std::size_t>(i)] =
                I[static_cast<std::size_t>(i - 2)] +
                step / 3.0 * (v[static_cast<std::size_t>(i - 2)] +
                              4.0 * v[static_cast<std::size_t>(i - 1)] +
                              v[static_cast<std::size_t>(i)]);
        // odd indices: integrate the local quadratic over the half panel
        for (int i = 1; i < M; i += 2)
            I[static_cast<std::size_t>(i)] =
                I[static_cast<std::size_t>(i - 1)] +
                step / 12.0 * (5.0 * v[static_cast<std::size_t>(i - 1)] +
                               8.0 * v[static_cast<std::size_t>(i)] -
                               v[static_cast<std::size_t>(i + 1)]);
    }
    return out;
}

} // namespace varreg
