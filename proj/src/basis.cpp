#include "varreg/basis.hpp"

#include <cmath>
#include <stdexcept>

#include "varreg/quadrature.hpp"

namespace varreg {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Row of endpoint-derivative functionals applied to shifted monomials s^m:
// at s=0 only m==k survives (k!/(b-a)^k); at s=1 the falling factorial.
void constraint_row(Eigen::MatrixXd& C, int row, bool at_b, int k, double a, double b,
                    int degree) {
    const double scale = std::pow(b - a, -k);
    for (int m = 0; m <= degree; ++m) {
        double v = 0.0;
        if (m >= k) {
            double fall = 1.0;
            for (int j = 0; j < k; ++j) fall *= static_cast<double>(m - j);
            v = at_b ? fall : (m == k ? factorial(k) : 0.0);
        }
        C(row, m) = v * scale;
    }
}

Eigen::MatrixXd constraint_matrix(const BoundarySpec& spec, int degree) {
    const int rows = static_cast<int>(spec.left.size() + spec.right.size());
    Eigen::MatrixXd C(rows, degree + 1);
    int r = 0;
    for (const auto& [i, v] : spec.left) {
        (void)v;
        constraint_row(C, r++, false, i, spec.a, spec.b, degree);
    }
    for (const auto& [j, v] : spec.right) {
        (void)v;
        constraint_row(C, r++, true, j, spec.a, spec.b, degree);
    }
    return C;
}

Eigen::VectorXd constraint_rhs(const BoundarySpec& spec) {
    Eigen::VectorXd rhs(spec.left.size() + spec.right.size());
    int r = 0;
    for (const auto& [i, v] : spec.left) { (void)i; rhs(r++) = v; }
    for (const auto& [j, v] : spec.right) { (void)j; rhs(r++) = v; }
    return rhs;
}

// Iterative lift for the full-order case: V0 is the chord; step k adds
// G_k(t) (V0-u0)^k (V0-w0)^k, fixing the k-th endpoint derivatives without
// disturbing lower ones.
Polynomial lift_full_order(const BoundarySpec& spec) {
    const double a = spec.a, b = spec.b;
    const int n = spec.order;
    const double u0 = spec.left.at(0), w0 = spec.right.at(0);
    Polynomial V = Polynomial::linear_s(a, b, u0, w0 - u0);
    // (V0 - u0)(V0 - w0) = (w0-u0)^2 s(s-1)
    const double q = (w0 - u0) * (w0 - u0);
    Polynomial base(a, b, {0.0, -q, q});
    Polynomial base_pow = Polynomial::constant(a, b, 1.0);
    for (int k = 1; k <= n; ++k) {
        base_pow = base_pow * base;
        const double denom = factorial(k) * std::pow(w0 - u0, 2 * k);
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        const double Ak = sign * std::pow(b - a, k) / denom * (spec.left.at(k) - V.eval(a, k));
        const double Bk = std::pow(b - a, k) / denom * (spec.right.at(k) - V.eval(b, k));
        Polynomial Gk = Polynomial::linear_s(a, b, Ak, Bk - Ak);
        V = V + Gk * base_pow;
    }
    return V;
}

Polynomial lift_interpolant(const BoundarySpec& spec) {
    const int m = static_cast<int>(spec.left.size() + spec.right.size());
    if (m == 0) return Polynomial::zero(spec.a, spec.b);
    const int maxidx = spec.max_constrained_order();
    int degree = std::max(maxidx, m - 1);
    const int degree_cap = maxidx + m;
    Eigen::VectorXd rhs = constraint_rhs(spec);
    for (; degree <= degree_cap; ++degree) {
        Eigen::MatrixXd C = constraint_matrix(spec, degree);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(C);
        cod.setThreshold(1e-10);
        if (cod.rank() < m) continue; // constraints dependent at this degree; enlarge
        Eigen::VectorXd c = cod.solve(rhs);
        Polynomial P(spec.a, spec.b, std::vector<double>(c.data(), c.data() + c.size()));
        // verify: only numeric failure of the solve is reportable
        double worst = 0.0;
        for (const auto& [i, v] : spec.left)
            worst = std::max(worst, std::abs(P.eval(spec.a, i) - v) / (1.0 + std::abs(v)));
        for (const auto& [j, v] : spec.right)
            worst = std::max(worst, std::abs(P.eval(spec.b, j) - v) / (1.0 + std::abs(v)));
        if (worst <= 1e-9) return P;
    }
    throw std::runtime_error("build_lift: endpoint-derivative solve failed numerically");
}

} // namespace

Polynomial build_lift(const BoundarySpec& spec) {
    spec.validate();
    if (spec.full_order() && spec.left.at(0) != spec.right.at(0))
        return lift_full_order(spec);
    return lift_interpolant(spec);
}

BasisPtr build_basis(const BoundarySpec& spec, int degree) {
    spec.validate();
    if (degree < 1) throw std::invalid_argument("build_basis: degree must be >= 1");
    if (degree < spec.max_constrained_order())
        throw std::invalid_argument("build_basis: degree too small for constrained "
                                    "derivative order " +
                                    std::to_string(spec.max_constrained_order()));
    auto basis = std::make_shared<Basis>(Basis{spec, degree, build_lift(spec), {}});
    const int m = static_cast<int>(spec.left.size() + spec.right.size());
    if (m == 0) {
        // unconstrained: all shifted monomials, orthonormal trivially? keep
        // plain monomial modes orthonormalized by QR of the identity
        for (int k = 0; k <= degree; ++k) {
            std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
            c[static_cast<std::size_t>(k)] = 1.0;
            basis->modes.emplace_back(spec.a, spec.b, std::move(c));
        }
        return basis;
    }
    Eigen::MatrixXd C = constraint_matrix(spec, degree);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(C.transpose());
    qr.setThreshold(1e-10);
    const int rank = static_cast<int>(qr.rank());
    const int nmodes = degree + 1 - rank;
    if (nmodes <= 0) return basis;
    Eigen::MatrixXd Q = qr.householderQ();
    for (int k = 0; k < nmodes; ++k) {
        Eigen::VectorXd col = Q.col(rank + k);
        basis->modes.emplace_back(spec.a, spec.b,
                                  std::vector<double>(col.data(), col.data() + col.size()));
    }
    return basis;
}

Trajectory::Trajectory(BasisPtr basis_, Eigen::VectorXd coeff_)
    : basis(std::move(basis_)), coeff(std::move(coeff_)) {
    if (!basis) throw std::invalid_argument("Trajectory: null basis");
    if (coeff.size() != basis->mode_count())
        throw std::invalid_argument("Trajectory: coefficient count " +
                                    std::to_string(coeff.size()) + " != mode count " +
                                    std::to_string(basis->mode_count()));
}

double Trajectory::eval(double t, int k) const {
    const double a = basis->spec.a, b = basis->spec.b;
    const double slack = 1e-12 * (b - a);
    if (t < a - slack || t > b + slack)
        throw std::domain_error("trajectory evaluated outside [a, b] at t = " +
                                std::to_string(t));
    double v = basis->lift.eval(t, k);
    for (int j = 0; j < basis->mode_count(); ++j)
        v += coeff(j) * basis->modes[static_cast<std::size_t>(j)].eval(t, k);
    return v;
}

double eval_trajectory(const Trajectory& u, double t, int k) { return u.eval(t, k); }

Norms norms(const Trajectory& u, int order, int grid_size) {
    if (grid_size < 65) throw std::invalid_argument("norms: grid_size must be >= 65");
    if (order < 0) throw std::invalid_argument("norms: order must be >= 0");
    const double a = u.basis->spec.a, b = u.basis->spec.b;
    // integrands |u^(i)|^2 have degree <= 2D: per-panel node count D+1 is exact
    Quadrature quad(a, b, 16, std::max(5, u.basis->degree + 1));
    Norms out;
    for (int i = 0; i <= order; ++i) {
        double sq = 0.0;
        for (std::size_t q = 0; q < quad.points.size(); ++q) {
            const double v = u.eval(quad.points[q], i);
            sq += quad.weights[q] * v * v;
        }
        out.sobolev += std::sqrt(std::max(0.0, sq));
        double mx = 0.0;
        for (int g = 0; g < grid_size; ++g) {
            const double t = a + (b - a) * g / (grid_size - 1);
            mx = std::max(mx, std::abs(u.eval(t, i)));
        }
        out.cn += mx;
    }
    return out;
}

Eigen::VectorXd fit_mode_coefficients(const Basis& basis, const Polynomial& target) {
    Polynomial diff = target - basis.lift;
    const int rows = std::max(diff.degree(), basis.degree) + 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, basis.mode_count());
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
    for (int k = 0; k < basis.mode_count(); ++k) {
        const auto& c = basis.modes[static_cast<std::size_t>(k)].coefficients_s();
        for (std::size_t i = 0; i < c.size(); ++i) A(static_cast<int>(i), k) = c[i];
    }
    const auto& d = diff.coefficients_s();
    for (std::size_t i = 0; i < d.size() && static_cast<int>(i) < rows; ++i)
        rhs(static_cast<int>(i)) = d[i];
    return A.colPivHouseholderQr().solve(rhs);
}

} // namespace varreg
