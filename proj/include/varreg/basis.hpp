#ifndef VARREG_BASIS_HPP
#define VARREG_BASIS_HPP

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "varreg/boundary.hpp"
#include "varreg/polynomial.hpp"

namespace varreg {

// Boundary lift plus an orthonormalized homogeneous mode set of degree <= D.
// Every mode's constrained endpoint derivatives vanish; trajectories are
// lift + sum of mode coefficients.
struct Basis {
    BoundarySpec spec;
    int degree = 0;
    Polynomial lift;
    std::vector<Polynomial> modes;

    int mode_count() const { return static_cast<int>(modes.size()); }
};

using BasisPtr = std::shared_ptr<const Basis>;

// Polynomial satisfying the inhomogeneous boundary data. Uses the iterative
// closed-form construction when N = N' = {0..n} and w0 != u0; otherwise a
// minimal-degree interpolant from the endpoint-derivative linear system.
Polynomial build_lift(const BoundarySpec& spec);

BasisPtr build_basis(const BoundarySpec& spec, int degree);

struct Trajectory {
    BasisPtr basis;
    Eigen::VectorXd coeff;

    Trajectory() = default;
    Trajectory(BasisPtr basis_, Eigen::VectorXd coeff_);

    // k-th derivative at t; throws std::domain_error outside [a, b]
    double eval(double t, int k = 0) const;
};

double eval_trajectory(const Trajectory& u, double t, int k);

struct Norms {
    double sobolev = 0.0; // sum_i ||u^(i)||_L2 by quadrature
    double cn = 0.0;      // sum_i max over grid |u^(i)|
};

Norms norms(const Trajectory& u, int order, int grid_size);

// Least-squares mode coefficients reproducing `target - lift` (test/setup
// helper; exact when target satisfies the boundary data and deg <= D).
Eigen::VectorXd fit_mode_coefficients(const Basis& basis, const Polynomial& target);

} // namespace varreg

#endif
