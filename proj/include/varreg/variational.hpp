#ifndef VARREG_VARIATIONAL_HPP
#define VARREG_VARIATIONAL_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "varreg/problem.hpp"

namespace varreg {

struct SolveStep {
    int iteration = 0;
    double grad_norm = 0.0;
    double step_length = 0.0;
    bool newton_direction = true;
};

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    double grad_norm = 0.0;
    double objective = 0.0;
    std::vector<SolveStep> history;
    std::string message;
};

// F(u) = int f(t, jet u) dt by composite Gauss quadrature, fixed summation order.
double objective(const Problem& p, const Trajectory& u);

// Entry k is the first variation against mode k (the Euler condition residual).
Eigen::VectorXd gradient(const Problem& p, const Trajectory& u);

// Second variation; symmetric by post-assembly symmetrization.
Eigen::MatrixXd hessian(const Problem& p, const Trajectory& u);
// As assembled, before symmetrization (asymmetry is a quadrature artifact).
Eigen::MatrixXd hessian_raw(const Problem& p, const Trajectory& u);

// Damped Newton on gradient = 0 with backtracking on ||gradient||^2 and a
// gradient-descent fallback on Hessian failure.
std::pair<Trajectory, SolveReport> solve_critical(const Problem& p, const Trajectory& init,
                                                  double tol = 1e-10, int max_iter = 100);

// |Richardson-extrapolated difference quotient - assembled first variation|
// / (1 + |assembled|). The quotient path uses objective() only.
double gateaux_check(const Problem& p, const Trajectory& u, const Eigen::VectorXd& direction,
                     const std::vector<double>& r_values);

} // namespace varreg

#endif
