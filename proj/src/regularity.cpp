#include "varreg/regularity.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace varreg {

namespace {

Bindings jet_bindings_at(const Trajectory& u, double t, int upto) {
    Bindings env;
    env.set_t(t);
    for (int i = 0; i <= upto; ++i) env.set_y(i, u.eval(t, i));
    return env;
}

// h_{m, n-m+2}: the m-fold antiderivative of df/dy_{n-m} along the jet
SampledFunction partial_term(const Problem& p, const Trajectory& u, int m, int grid_size) {
    const int n = p.order();
    const double a = p.spec().a, b = p.spec().b;
    SampledFunction h0(a, b, grid_size);
    const Expr& partial = p.lagr->d_y(n - m);
    for (int i = 0; i < grid_size; ++i) {
        const double t = h0.t(i);
        try {
            h0.values[static_cast<std::size_t>(i)] =
                partial.evaluate(jet_bindings_at(u, t, n));
        } catch (const EvalError& e) {
            throw EvalError(std::string(e.what()) + " (grid index " + std::to_string(i) + ")",
                            e.node);
        }
    }
    return iterated_antiderivative(h0, m);
}

// shifted Legendre polynomials on [a, b] as Polynomials in s
std::vector<Polynomial> legendre_basis(double a, double b, int order) {
    std::vector<Polynomial> P;
    P.push_back(Polynomial::constant(a, b, 1.0));
    if (order >= 1) P.push_back(Polynomial(a, b, {-1.0, 2.0}));
    Polynomial x(a, b, {-1.0, 2.0});
    for (int k = 1; k < order; ++k) {
        Polynomial next = (x * P[static_cast<std::size_t>(k)])
                              .scaled((2.0 * k + 1.0) / (k + 1.0)) -
                          P[static_cast<std::size_t>(k - 1)]
                              .scaled(static_cast<double>(k) / (k + 1.0));
        P.push_back(next);
    }
    return P;
}

} // namespace

SampledFunction dbr_function(const Problem& p, const Trajectory& u, int grid_size) {
    if (!p.lagr->smooth())
        throw NonSmoothError("dbr_function: Lagrangian is non-smooth (contains abs)");
    const int n = p.order();
    SampledFunction D(p.spec().a, p.spec().b, grid_size);
    for (int m = 0; m <= n; ++m) {
        const SampledFunction term = partial_term(p, u, m, grid_size);
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        for (int i = 0; i < grid_size; ++i)
            D.values[static_cast<std::size_t>(i)] +=
                sign * term.values[static_cast<std::size_t>(i)];
    }
    return D;
}

DbrReport dbr_fit(const SampledFunction& D, int order, double tolerance) {
    const int M = D.size();
    if (M <= order + 1) throw std::invalid_argument("dbr_fit: grid too small for fit degree");
    const auto leg = legendre_basis(D.a, D.b, order);
    Eigen::MatrixXd A(M, order + 1);
    Eigen::VectorXd rhs(M);
    for (int i = 0; i < M; ++i) {
        const double t = D.t(i);
        for (int k = 0; k <= order; ++k) A(i, k) = leg[static_cast<std::size_t>(k)].eval(t);
        rhs(i) = D.values[static_cast<std::size_t>(i)];
    }
    Eigen::VectorXd coef = A.colPivHouseholderQr().solve(rhs);
    Polynomial fit = Polynomial::zero(D.a, D.b);
    for (int k = 0; k <= order; ++k)
        fit = fit + leg[static_cast<std::size_t>(k)].scaled(coef(k));

    double resid = 0.0;
    for (int i = 0; i < M; ++i)
        resid = std::max(resid,
                         std::abs(D.values[static_cast<std::size_t>(i)] - fit.eval(D.t(i))));
    const double tol_applied = tolerance * (1.0 + D.sup_norm());
    DbrReport rep{D, fit, fit.t_monomial_coefficients(), resid, tol_applied,
                  resid <= tol_applied};
    return rep;
}

std::vector<std::pair<double, double>> degeneracy_scan(const Problem& p, const Trajectory& u,
                                                       int grid_size, double threshold) {
    if (!p.lagr->smooth())
        throw NonSmoothError("degeneracy_scan: Lagrangian is non-smooth (contains abs)");
    const int n = p.order();
    const Expr& d2 = p.lagr->d2_yy(n, n);
    std::vector<std::pair<double, double>> flagged;
    const double a = p.spec().a, b = p.spec().b;
    for (int i = 0; i < grid_size; ++i) {
        const double t = a + (b - a) * i / (grid_size - 1);
        const double v = d2.evaluate(jet_bindings_at(u, t, n));
        if (std::abs(v) <= threshold) flagged.emplace_back(t, v);
    }
    return flagged;
}

RecoveryReport recover_highest(const Problem& p, const Trajectory& u, const DbrReport& fit) {
    if (!fit.critical)
        throw std::invalid_argument("recover_highest: dbr verdict is non-critical; "
                                    "no polynomial identity to invert");
    const int n = p.order();
    const int M = fit.D.size();
    auto degen = degeneracy_scan(p, u, M);
    if (!degen.empty())
        throw HypothesisError("recover_highest: d2f/dy_n^2 vanishes along the jet at " +
                                  std::to_string(degen.size()) + " grid point(s)",
                              std::move(degen));

    // tail(t) = sum_{m=1}^n (-1)^m h_{m, n-m+2}(t)
    SampledFunction tail(fit.D.a, fit.D.b, M);
    for (int m = 1; m <= n; ++m) {
        const SampledFunction term = partial_term(p, u, m, M);
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        for (int i = 0; i < M; ++i)
            tail.values[static_cast<std::size_t>(i)] +=
                sign * term.values[static_cast<std::size_t>(i)];
    }

    const Expr& psi_expr = p.lagr->d_y(n);
    const Expr& dpsi_expr = p.lagr->d2_yy(n, n);
    const double root_tol = 1e-10;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    RecoveryReport rep{SampledFunction(fit.D.a, fit.D.b, M), 0.0, 0.0, {}, {}, {}};
    std::vector<bool> ok(static_cast<std::size_t>(M), false);

    for (int i = 0; i < M; ++i) {
        const double t = fit.D.t(i);
        Bindings env = jet_bindings_at(u, t, n - 1);
        const double shift = tail.values[static_cast<std::size_t>(i)] - fit.fit.eval(t);
        auto g = [&](double s) {
            Bindings e = env;
            e.set_y(n, s);
            return psi_expr.evaluate(e) + shift;
        };
        auto dpsi = [&](double s) {
            Bindings e = env;
            e.set_y(n, s);
            return dpsi_expr.evaluate(e);
        };

        bool mono_ok = true;
        auto check_mono = [&](double s) {
            const double d = dpsi(s);
            if (d <= 0.0) {
                rep.monotonicity_violations.emplace_back(t, d);
                rep.failed.push_back({i, t, "monotonicity"});
                mono_ok = false;
            }
            return d;
        };

        const double s0 = u.eval(t, n);
        check_mono(s0);
        if (!mono_ok) {
            rep.s.values[static_cast<std::size_t>(i)] = nan;
            continue;
        }
        double gs0 = g(s0);
        double root = s0, resid = std::abs(gs0);
        if (resid > root_tol) {
            // bracket by doubling expansion around s0
            double delta = 1e-6 * std::max(1.0, std::abs(s0));
            double lo = s0, hi = s0, glo = gs0, ghi = gs0;
            bool bracketed = false;
            for (int expand = 0; expand < 60; ++expand) {
                lo = s0 - delta;
                hi = s0 + delta;
                glo = g(lo);
                ghi = g(hi);
                check_mono(lo);
                if (mono_ok) check_mono(hi);
                if (!mono_ok) break;
                if ((glo <= 0.0 && ghi >= 0.0) || (glo >= 0.0 && ghi <= 0.0)) {
                    bracketed = true;
                    break;
                }
                delta *= 2.0;
            }
            if (!mono_ok) {
                rep.s.values[static_cast<std::size_t>(i)] = nan;
                continue;
            }
            if (!bracketed) {
                rep.failed.push_back({i, t, "bracket"});
                rep.s.values[static_cast<std::size_t>(i)] = nan;
                continue;
            }
            // orient so g(lo) <= 0 <= g(hi)
            if (glo > ghi) {
                std::swap(lo, hi);
                std::swap(glo, ghi);
            }
            double s = 0.5 * (lo + hi);
            double gs = g(s);
            for (int it = 0; it < 200 && std::abs(gs) > root_tol; ++it) {
                const double d = check_mono(s);
                if (!mono_ok) break;
                double snew = s - gs / d;
                if (!(snew > std::min(lo, hi) && snew < std::max(lo, hi)))
                    snew = 0.5 * (lo + hi); // bisection safeguard
                if (gs < 0.0) lo = s; else hi = s;
                s = snew;
                gs = g(s);
            }
            if (!mono_ok) {
                rep.s.values[static_cast<std::size_t>(i)] = nan;
                continue;
            }
            root = s;
            resid = std::abs(gs);
        }
        if (resid > root_tol) {
            rep.failed.push_back({i, t, "bracket"});
            rep.s.values[static_cast<std::size_t>(i)] = nan;
            continue;
        }
        rep.s.values[static_cast<std::size_t>(i)] = root;
        ok[static_cast<std::size_t>(i)] = true;
        rep.max_root_residual = std::max(rep.max_root_residual, resid);
        rep.sup_discrepancy = std::max(rep.sup_discrepancy, std::abs(root - s0));
    }

    for (int gap = 1; gap < M; gap *= 2) {
        double w = 0.0;
        for (int i = 0; i + gap < M; ++i)
            if (ok[static_cast<std::size_t>(i)] && ok[static_cast<std::size_t>(i + gap)])
                w = std::max(w, std::abs(rep.s.values[static_cast<std::size_t>(i + gap)] -
                                         rep.s.values[static_cast<std::size_t>(i)]));
        rep.modulus_of_continuity.emplace_back(gap, w);
    }
    return rep;
}

} // namespace varreg
