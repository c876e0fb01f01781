#ifndef VARREG_REGULARITY_HPP
#define VARREG_REGULARITY_HPP

#include <string>
#include <utility>
#include <vector>

#include "varreg/polynomial.hpp"
#include "varreg/problem.hpp"
#include "varreg/sampled.hpp"

namespace varreg {

// A hypothesis failure that blocks the recovery step entirely (vanishing
// second partial in the highest derivative along the jet).
struct HypothesisError : std::runtime_error {
    HypothesisError(const std::string& what, std::vector<std::pair<double, double>> pts)
        : std::runtime_error(what), points(std::move(pts)) {}
    std::vector<std::pair<double, double>> points; // (t, value)
};

struct DbrReport {
    SampledFunction D;        // the alternating antiderivative sum
    Polynomial fit;           // degree-n least squares fit of D
    std::vector<double> coefficients_t; // fit in powers of t, c0..cn
    double residual = 0.0;    // sup over grid of |D - fit|
    double tolerance = 0.0;   // residual threshold actually applied
    bool critical = false;
};

struct FailedPoint {
    int index = 0;
    double t = 0.0;
    std::string reason; // "monotonicity" or "bracket"
};

struct RecoveryReport {
    SampledFunction s;                 // recovered highest derivative
    double max_root_residual = 0.0;    // over non-failed points
    double sup_discrepancy = 0.0;      // sup |s - u^(n)| over non-failed points
    std::vector<std::pair<double, double>> monotonicity_violations; // (t, dpsi/ds)
    std::vector<FailedPoint> failed;
    // (gap in grid steps, max |s_{i+gap} - s_i|) on dyadic gaps
    std::vector<std::pair<int, double>> modulus_of_continuity;
};

// D(t) = sum_{m=0}^n (-1)^m [m-fold antiderivative of df/dy_{n-m} along the jet]
SampledFunction dbr_function(const Problem& p, const Trajectory& u, int grid_size);

// Degree-n least-squares fit; critical iff residual <= tol*(1 + sup|D|).
DbrReport dbr_fit(const SampledFunction& D, int order, double tolerance = 1e-7);

// Points where |d2f/dy_n^2| along the jet is below the threshold.
std::vector<std::pair<double, double>> degeneracy_scan(const Problem& p, const Trajectory& u,
                                                       int grid_size,
                                                       double threshold = 1e-8);

// Per grid point, solves psi(t, s) + tail(t) - p_fit(t) = 0 for s by bracket
// expansion plus safeguarded Newton/bisection. Throws HypothesisError when the
// degeneracy scan flags points; records monotonicity/bracket failures per point.
RecoveryReport recover_highest(const Problem& p, const Trajectory& u, const DbrReport& fit);

} // namespace varreg

#endif
