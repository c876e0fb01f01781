#include "varreg/variational.hpp"

#include <cmath>

namespace varreg {

namespace {

// jet of u at the quadrature points: rows i = 0..n, columns = nodes
Eigen::MatrixXd sample_jet(const Problem& p, const Trajectory& u) {
    const int n = p.order();
    const auto& pts = p.quad.points;
    Eigen::MatrixXd jet(n + 1, pts.size());
    for (std::size_t q = 0; q < pts.size(); ++q)
        for (int i = 0; i <= n; ++i) jet(i, static_cast<int>(q)) = u.eval(pts[q], i);
    return jet;
}

// mode derivative tables: table[i](k, q) = mode_k^{(i)}(t_q)
std::vector<Eigen::MatrixXd> sample_modes(const Problem& p) {
    const int n = p.order();
    const int K = p.basis->mode_count();
    const auto& pts = p.quad.points;
    std::vector<Eigen::MatrixXd> tables(n + 1, Eigen::MatrixXd(K, pts.size()));
    for (int i = 0; i <= n; ++i)
        for (int k = 0; k < K; ++k)
            for (std::size_t q = 0; q < pts.size(); ++q)
                tables[static_cast<std::size_t>(i)](k, static_cast<int>(q)) =
                    p.basis->modes[static_cast<std::size_t>(k)].eval(pts[q], i);
    return tables;
}

Bindings jet_bindings(double t, const Eigen::MatrixXd& jet, int col) {
    Bindings env;
    env.set_t(t);
    for (int i = 0; i < jet.rows(); ++i) env.set_y(i, jet(i, col));
    return env;
}

double potential_value(const PotentialTerm& pot, double t, double x) {
    if (x == 0.0) return 0.0;
    const GaussRule& rule = gauss_legendre(pot.inner_order);
    const double mid = 0.5 * x, half = 0.5 * x;
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        acc += half * rule.weights[k] * pot.g->value(t, mid + half * rule.nodes[k]);
    return pot.coeff * acc;
}

} // namespace

double objective(const Problem& p, const Trajectory& u) {
    if (u.basis != p.basis)
        throw std::invalid_argument("objective: trajectory built on a different basis");
    const Eigen::MatrixXd jet = sample_jet(p, u);
    const Expr& f = p.lagr->f();
    double acc = 0.0;
    for (std::size_t q = 0; q < p.quad.points.size(); ++q) {
        const double t = p.quad.points[q];
        try {
            double v = f.evaluate(jet_bindings(t, jet, static_cast<int>(q)));
            if (p.potential)
                v += potential_value(*p.potential, t, jet(0, static_cast<int>(q)));
            acc += p.quad.weights[q] * v;
        } catch (const EvalError& e) {
            throw EvalError(std::string(e.what()) + " (quadrature node " + std::to_string(q) +
                                ", t = " + std::to_string(t) + ")",
                            e.node);
        }
    }
    return acc;
}

Eigen::VectorXd gradient(const Problem& p, const Trajectory& u) {
    if (u.basis != p.basis)
        throw std::invalid_argument("gradient: trajectory built on a different basis");
    const int n = p.order();
    const int K = p.basis->mode_count();
    const Eigen::MatrixXd jet = sample_jet(p, u);
    const auto tables = sample_modes(p);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(K);
    for (std::size_t q = 0; q < p.quad.points.size(); ++q) {
        const int c = static_cast<int>(q);
        const double t = p.quad.points[q];
        const double w = p.quad.weights[q];
        Bindings env = jet_bindings(t, jet, c);
        for (int i = 0; i <= n; ++i) {
            const double pi = p.lagr->d_y(i).evaluate(env);
            if (pi == 0.0) continue;
            for (int k = 0; k < K; ++k)
                g(k) += w * pi * tables[static_cast<std::size_t>(i)](k, c);
        }
        if (p.potential) {
            const double gv = p.potential->coeff * p.potential->g->value(t, jet(0, c));
            for (int k = 0; k < K; ++k) g(k) += w * gv * tables[0](k, c);
        }
    }
    return g;
}

Eigen::MatrixXd hessian_raw(const Problem& p, const Trajectory& u) {
    if (u.basis != p.basis)
        throw std::invalid_argument("hessian: trajectory built on a different basis");
    const int n = p.order();
    const int K = p.basis->mode_count();
    const Eigen::MatrixXd jet = sample_jet(p, u);
    const auto tables = sample_modes(p);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(K, K);
    for (std::size_t q = 0; q < p.quad.points.size(); ++q) {
        const int c = static_cast<int>(q);
        const double t = p.quad.points[q];
        const double w = p.quad.weights[q];
        Bindings env = jet_bindings(t, jet, c);
        for (int i = 0; i <= n; ++i) {
            for (int j = 0; j <= n; ++j) {
                const double dij = p.lagr->d2_yy(i, j).evaluate(env);
                if (dij == 0.0) continue;
                for (int k = 0; k < K; ++k) {
                    const double fk = tables[static_cast<std::size_t>(i)](k, c);
                    if (fk == 0.0) continue;
                    for (int l = 0; l < K; ++l)
                        H(k, l) += w * dij * fk * tables[static_cast<std::size_t>(j)](l, c);
                }
            }
        }
        if (p.potential) {
            const double gx = p.potential->coeff * p.potential->g->dx(t, jet(0, c));
            if (gx != 0.0)
                for (int k = 0; k < K; ++k)
                    for (int l = 0; l < K; ++l)
                        H(k, l) += w * gx * tables[0](k, c) * tables[0](l, c);
        }
    }
    return H;
}

Eigen::MatrixXd hessian(const Problem& p, const Trajectory& u) {
    Eigen::MatrixXd H = hessian_raw(p, u);
    return 0.5 * (H + H.transpose());
}

std::pair<Trajectory, SolveReport> solve_critical(const Problem& p, const Trajectory& init,
                                                  double tol, int max_iter) {
    if (tol <= 0.0) throw std::invalid_argument("solve_critical: tol must be > 0");
    if (max_iter < 0) throw std::invalid_argument("solve_critical: max_iter must be >= 0");
    Trajectory u = init;
    SolveReport rep;
    if (p.basis->mode_count() == 0) {
        // no homogeneous freedom; the lift is the only admissible trajectory
        rep.converged = max_iter > 0;
        rep.message = "no modes";
        if (rep.converged) rep.objective = objective(p, u);
        return {u, rep};
    }

    auto grad_at = [&](const Eigen::VectorXd& c) {
        return gradient(p, Trajectory(p.basis, c));
    };
    // domain errors at trial points count as failed trials, not aborts
    auto try_grad_at = [&](const Eigen::VectorXd& c, Eigen::VectorXd& out) {
        try {
            out = grad_at(c);
            return out.allFinite();
        } catch (const EvalError&) {
            return false;
        }
    };

    Eigen::VectorXd c = u.coeff;
    Eigen::VectorXd g;
    double gn = std::numeric_limits<double>::infinity();
    bool have_g = false;
    while (rep.iterations < max_iter) {
        if (!have_g) {
            g = grad_at(c);
            gn = g.lpNorm<Eigen::Infinity>();
            have_g = true;
        }
        if (!g.allFinite()) {
            rep.message = "NaN encountered in gradient";
            break;
        }
        if (gn <= tol) {
            rep.converged = true;
            break;
        }
        Eigen::MatrixXd H = hessian(p, Trajectory(p.basis, c));
        bool newton = H.allFinite();
        Eigen::VectorXd d;
        if (newton) {
            d = H.fullPivLu().solve(-g);
            const double resid = (H * d + g).norm();
            if (!d.allFinite() || resid > 1e-6 * std::max(1.0, g.norm())) newton = false;
        }
        if (!newton) d = -g;

        const double merit0 = g.squaredNorm();
        double alpha = 1.0;
        Eigen::VectorXd g_trial;
        double gn_trial = 0.0;
        bool accepted = false;
        while (alpha > std::ldexp(1.0, -30)) {
            Eigen::VectorXd c_trial = c + alpha * d;
            if (try_grad_at(c_trial, g_trial) &&
                g_trial.squaredNorm() <= (1.0 - 2e-4 * alpha) * merit0) {
                c = c_trial;
                gn_trial = g_trial.lpNorm<Eigen::Infinity>();
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted && newton) {
            // retry once along steepest descent before giving up
            d = -g;
            alpha = 1.0;
            while (alpha > std::ldexp(1.0, -30)) {
                Eigen::VectorXd c_trial = c + alpha * d;
                if (try_grad_at(c_trial, g_trial) &&
                    g_trial.squaredNorm() <= (1.0 - 2e-4 * alpha) * merit0) {
                    c = c_trial;
                    gn_trial = g_trial.lpNorm<Eigen::Infinity>();
                    accepted = true;
                    newton = false;
                    break;
                }
                alpha *= 0.5;
            }
        }
        rep.iterations += 1;
        if (!accepted) {
            rep.message = "line search failed to reduce the gradient norm";
            rep.history.push_back({rep.iterations, gn, 0.0, newton});
            break;
        }
        rep.history.push_back({rep.iterations, gn_trial, alpha, newton});
        g = g_trial;
        gn = gn_trial;
        have_g = true;
    }
    if (!rep.converged && max_iter > 0 && have_g && g.allFinite() && gn <= tol)
        rep.converged = true;

    u = Trajectory(p.basis, c);
    rep.grad_norm = have_g ? gn : 0.0;
    try {
        rep.objective = objective(p, u);
    } catch (const EvalError&) {
        rep.objective = std::numeric_limits<double>::quiet_NaN();
    }
    if (!rep.converged && rep.message.empty())
        rep.message = max_iter == 0 ? "no iterations requested" : "max_iter reached";
    return {u, rep};
}

double gateaux_check(const Problem& p, const Trajectory& u, const Eigen::VectorXd& direction,
                     const std::vector<double>& r_values) {
    if (direction.size() != p.basis->mode_count())
        throw std::invalid_argument("gateaux_check: direction size != mode count");
    if (r_values.empty()) throw std::invalid_argument("gateaux_check: empty r list");
    for (std::size_t i = 0; i < r_values.size(); ++i) {
        if (r_values[i] <= 0.0)
            throw std::invalid_argument("gateaux_check: r values must be positive");
        if (i > 0 && r_values[i] >= r_values[i - 1])
            throw std::invalid_argument("gateaux_check: r values must decrease");
    }
    const double F0 = objective(p, u);
    std::vector<double> quot(r_values.size());
    for (std::size_t i = 0; i < r_values.size(); ++i) {
        Trajectory shifted(p.basis, u.coeff + r_values[i] * direction);
        quot[i] = (objective(p, shifted) - F0) / r_values[i];
    }
    // Neville extrapolation of the quotient polynomial in r to r = 0
    std::vector<double> tab = quot;
    const std::size_t m = r_values.size();
    for (std::size_t level = 1; level < m; ++level)
        for (std::size_t i = 0; i + level < m; ++i) {
            const double r0 = r_values[i], r1 = r_values[i + level];
            tab[i] = (r0 * tab[i + 1] - r1 * tab[i]) / (r0 - r1);
        }
    const double extrapolated = tab[0];
    const double assembled = gradient(p, u).dot(direction);
    return std::abs(extrapolated - assembled) / (1.0 + std::abs(assembled));
}

} // namespace varreg
