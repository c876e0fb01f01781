#include "varreg/mollify.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace varreg {

namespace {

// raw bump exp(-1/(1 - r^2)) on (-1, 1) and its first two derivatives;
// everything vanishes to all orders at |r| -> 1 (guard avoids 0 * inf)
double bump(double r) {
    const double q = 1.0 - r * r;
    if (q < 1e-8) return 0.0;
    return std::exp(-1.0 / q);
}

double bump_d1(double r) {
    const double q = 1.0 - r * r;
    if (q < 1e-8) return 0.0;
    return std::exp(-1.0 / q) * (-2.0 * r / (q * q));
}

double bump_d2(double r) {
    const double q = 1.0 - r * r;
    if (q < 1e-8) return 0.0;
    const double w1 = -2.0 * r / (q * q);
    const double w2 = (-2.0 - 6.0 * r * r) / (q * q * q);
    return std::exp(-1.0 / q) * (w2 + w1 * w1);
}

// I0 = int_{-1}^{1} bump, computed once (16 x 32 composite Gauss)
double bump_mass() {
    static const double mass = [] {
        const GaussRule& rule = gauss_legendre(32);
        double acc = 0.0;
        const int panels = 16;
        const double h = 2.0 / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = -1.0 + (p + 0.5) * h;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k)
                acc += 0.5 * h * rule.weights[k] * bump(mid + 0.5 * h * rule.nodes[k]);
        }
        return acc;
    }();
    return mass;
}

double eval_source(const Expr& e, double t, double x) {
    thread_local Bindings env; // reused to avoid per-call allocation
    env.set_t(t).set_y(0, x);
    return e.evaluate(env);
}

} // namespace

// Per-axis convolution rule: node offsets from the evaluation point together
// with weights premultiplied by the (derivative of the) normalized kernel.
// The kernel argument is always -offset, so everything is fixed per width.
struct MollifiedFunction::AxisRule {
    std::vector<double> offset, w_val, w_d1, w_d2;

    AxisRule() = default;
    AxisRule(double eps, int order, int panels, double inv_mass) {
        const GaussRule& rule = gauss_legendre(order);
        const double h = 2.0 * eps / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = -eps + (p + 0.5) * h;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                const double off = mid + 0.5 * h * rule.nodes[k];
                const double w = 0.5 * h * rule.weights[k];
                const double rho = -off / eps;
                offset.push_back(off);
                w_val.push_back(w * bump(rho) * inv_mass);
                w_d1.push_back(w * bump_d1(rho) * inv_mass / eps);
                w_d2.push_back(w * bump_d2(rho) * inv_mass / (eps * eps));
            }
        }
    }

    const std::vector<double>& weights(int deriv) const {
        return deriv == 0 ? w_val : deriv == 1 ? w_d1 : w_d2;
    }
};

MollifiedFunction::MollifiedFunction(Expr f, double eps, double a, double b, double x_lo,
                                     double x_hi, int order_per_axis, int panels_per_axis)
    : f_(std::move(f)), eps_(eps), a_(a), b_(b), x_lo_(x_lo), x_hi_(x_hi),
      order_(order_per_axis), panels_(panels_per_axis) {
    if (!(eps_ > 0.0)) throw std::invalid_argument("MollifiedFunction: eps must be > 0");
    if (!(a_ < b_) || !(x_lo_ < x_hi_))
        throw std::invalid_argument("MollifiedFunction: bad evaluation box");
    if (order_ < 2 || panels_ < 1)
        throw std::invalid_argument("MollifiedFunction: bad quadrature configuration");
    if (f_.max_y_index() > 0)
        throw std::invalid_argument("MollifiedFunction: source must be in (t, y0)");
    inv_mass_ = 1.0 / (eps_ * bump_mass());
    dep_t_ = f_.depends_on(kVarT);
    dep_x_ = f_.depends_on(0);
    rule_ = std::make_shared<const AxisRule>(eps_, order_, panels_, inv_mass_);

    // additive split: t-only terms (with constants), x-only terms, mixed rest;
    // separable parts convolve along one axis only
    std::vector<std::pair<Expr, double>> terms;
    std::function<void(const Expr&, double)> flatten = [&](const Expr& e, double sign) {
        const ExprNode& n = e.node();
        if (n.kind == ExprNode::Kind::Binary &&
            (n.bop == BinaryOp::Add || n.bop == BinaryOp::Sub)) {
            flatten(detail_wrap_node(n.lhs), sign);
            flatten(detail_wrap_node(n.rhs), n.bop == BinaryOp::Add ? sign : -sign);
            return;
        }
        if (n.kind == ExprNode::Kind::Unary && n.uop == UnaryOp::Neg) {
            flatten(detail_wrap_node(n.lhs), -sign);
            return;
        }
        terms.emplace_back(e, sign);
    };
    flatten(f_, 1.0);
    Expr gt = Expr::constant(0.0), hx = Expr::constant(0.0), mixed = Expr::constant(0.0);
    for (auto& [term, sign] : terms) {
        Expr signed_term = sign < 0 ? -term : term;
        const bool in_t = term.depends_on(kVarT);
        const bool in_x = term.depends_on(0);
        if (in_t && in_x) mixed = mixed + signed_term;
        else if (in_x) hx = hx + signed_term;
        else gt = gt + signed_term;
    }
    part_t_ = gt;
    part_x_ = hx;
    part_mixed_ = mixed;
    double c = 1.0;
    t_is_zero_ = part_t_.is_constant(&c) && c == 0.0;
    has_t_ = part_t_.depends_on(kVarT);
    has_x_ = part_x_.depends_on(0);
    has_mixed_ = part_mixed_.depends_on(0) || part_mixed_.depends_on(kVarT);
}

double MollifiedFunction::kernel_mass_integral(double eps, int order, int panels) {
    // independent of the cached tables: composite Gauss of eta_eps over its support
    const GaussRule& rule = gauss_legendre(order);
    const double inv = 1.0 / (eps * bump_mass());
    double acc = 0.0;
    const double h = 2.0 * eps / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = -eps + (p + 0.5) * h;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double r = mid + 0.5 * h * rule.nodes[k];
            acc += 0.5 * h * rule.weights[k] * bump(r / eps) * inv;
        }
    }
    return acc;
}

double MollifiedFunction::conv_t(const Expr& g, double t, int deriv) const {
    const auto& w = rule_->weights(deriv);
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double s = std::min(std::max(t + rule_->offset[i], a_), b_);
        acc += w[i] * eval_source(g, s, 0.0);
    }
    return acc;
}

double MollifiedFunction::conv_x(const Expr& h, double x, int deriv) const {
    const auto& w = rule_->weights(deriv);
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        acc += w[i] * eval_source(h, 0.0, x + rule_->offset[i]);
    return acc;
}

double MollifiedFunction::conv_mixed(const Expr& m, double t, double x, int dt,
                                     int dx) const {
    const auto& wt = rule_->weights(dt);
    const auto& wx = rule_->weights(dx);
    double acc = 0.0;
    for (std::size_t i = 0; i < wt.size(); ++i) {
        if (wt[i] == 0.0) continue;
        const double s = std::min(std::max(t + rule_->offset[i], a_), b_);
        double inner = 0.0;
        for (std::size_t j = 0; j < wx.size(); ++j)
            inner += wx[j] * eval_source(m, s, x + rule_->offset[j]);
        acc += wt[i] * inner;
    }
    return acc;
}

double MollifiedFunction::eval(double t, double x, Part which) const {
    if (t < a_ - eps_ || t > b_ + eps_ || x < x_lo_ - eps_ || x > x_hi_ + eps_)
        throw std::invalid_argument("MollifiedFunction: evaluation point outside the "
                                    "declared box expanded by eps");
    double acc = 0.0;
    switch (which) {
        case Part::Value:
            if (!t_is_zero_) acc += conv_t(part_t_, t, 0); // constants ride here
            if (has_x_) acc += conv_x(part_x_, x, 0);
            if (has_mixed_) acc += conv_mixed(part_mixed_, t, x, 0, 0);
            break;
        case Part::Dt:
            if (has_t_) acc += conv_t(part_t_, t, 1);
            if (has_mixed_) acc += conv_mixed(part_mixed_, t, x, 1, 0);
            break;
        case Part::Dx:
            if (has_x_) acc += conv_x(part_x_, x, 1);
            if (has_mixed_) acc += conv_mixed(part_mixed_, t, x, 0, 1);
            break;
        case Part::Dxx:
            if (has_x_) acc += conv_x(part_x_, x, 2);
            if (has_mixed_) acc += conv_mixed(part_mixed_, t, x, 0, 2);
            break;
    }
    return acc;
}

namespace {

std::vector<double> grid_points(double a, double b, int M) {
    std::vector<double> g(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) g[static_cast<std::size_t>(i)] = a + (b - a) * i / (M - 1);
    return g;
}

double sup_abs_diff(const std::vector<double>& u, const std::vector<double>& v) {
    double m = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i] - v[i]));
    return m;
}

// sampled x-Lipschitz estimate of f_eps over the realized curve
double lipschitz_x(const MollifiedFunction& f, const std::vector<double>& ts,
                   const std::vector<double>& xs, double scale) {
    double L = 0.0;
    const double base = std::max(scale, 1e-6);
    for (std::size_t i = 0; i < ts.size(); i += 8) {
        for (double d : {base, 0.5 * base, 0.25 * base}) {
            const double f0 = f.value(ts[i], xs[i]);
            const double f1 = f.value(ts[i], xs[i] + d);
            L = std::max(L, std::abs(f1 - f0) / d);
        }
    }
    return L;
}

void level_samples(const CascadeReport& rep, const CascadeLevel& lv,
                   std::vector<double>& f_along, std::vector<double>& xpp_poly) {
    const auto ts = grid_points(rep.a, rep.b, rep.grid_size);
    f_along.resize(ts.size());
    xpp_poly.resize(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double xv = lv.x.eval(ts[i], 0);
        f_along[i] = lv.f_eps->value(ts[i], xv);
        xpp_poly[i] = lv.x.eval(ts[i], 2);
    }
}

} // namespace

CascadeReport cascade(const Expr& f, const std::vector<double>& widths, double bc_left,
                      double bc_right, const CascadeOptions& opt) {
    if (widths.empty()) throw std::invalid_argument("cascade: empty width list");
    for (std::size_t i = 0; i < widths.size(); ++i) {
        if (widths[i] <= 0.0) throw std::invalid_argument("cascade: widths must be positive");
        if (i > 0 && widths[i] >= widths[i - 1])
            throw std::invalid_argument("cascade: widths must strictly decrease");
    }
    if (f.max_y_index() > 0)
        throw std::invalid_argument("cascade: source must be an expression in (t, y0)");

    CascadeReport rep;
    rep.widths = widths;
    rep.grid_size = opt.grid_size;
    rep.a = opt.a;
    rep.b = opt.b;
    rep.f_depends_x = f.depends_on(0);
    const double h = (opt.b - opt.a) / (opt.grid_size - 1);
    rep.slack = 2.0 * (100.0 * opt.tol + h * h);

    BoundarySpec spec;
    spec.a = opt.a;
    spec.b = opt.b;
    spec.order = 1;
    spec.left[0] = bc_left;
    spec.right[0] = bc_right;
    BasisPtr basis = build_basis(spec, opt.degree);
    auto lagr = std::make_shared<const Lagrangian>(1, parse("y1^2/2"));

    for (double eps : widths) {
        CascadeLevel lv;
        lv.width = eps;
        lv.f_eps = std::make_shared<const MollifiedFunction>(
            f, eps, opt.a, opt.b, opt.x_lo, opt.x_hi, opt.kernel_order, opt.kernel_panels);
        PotentialTerm pot{std::make_shared<MollifiedField>(lv.f_eps), 1.0, 16};
        Problem prob(lagr, basis, Quadrature(opt.a, opt.b, opt.panels, opt.nodes), pot);
        auto [x, solve] = solve_critical(prob, prob.lift_trajectory(), opt.tol, opt.max_iter);
        lv.x = x;
        lv.solve = solve;
        level_samples(rep, lv, lv.f_along, lv.xpp_poly);
        lv.galerkin_defect = sup_abs_diff(lv.xpp_poly, lv.f_along);
        rep.levels.push_back(std::move(lv));
    }

    const auto ts = grid_points(opt.a, opt.b, opt.grid_size);
    const std::size_t L = rep.levels.size();
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t j = i + 1; j < L; ++j) {
            const CascadeLevel& A = rep.levels[i];
            const CascadeLevel& B = rep.levels[j];
            PairCheck pc;
            pc.i = static_cast<int>(i);
            pc.j = static_cast<int>(j);
            if (!A.solve.converged || !B.solve.converged) {
                rep.pairs.push_back(pc);
                continue;
            }
            pc.d2_sup = sup_abs_diff(A.f_along, B.f_along);
            // ||f_i - f_j|| sampled at the common argument x_i(t)
            std::vector<double> xi(ts.size()), fj_at_xi(ts.size());
            double x_gap = 0.0;
            for (std::size_t k = 0; k < ts.size(); ++k) {
                xi[k] = A.x.eval(ts[k], 0);
                fj_at_xi[k] = B.f_eps->value(ts[k], xi[k]);
                x_gap = std::max(x_gap, std::abs(xi[k] - B.x.eval(ts[k], 0)));
            }
            pc.f_sup = sup_abs_diff(A.f_along, fj_at_xi);
            if (rep.f_depends_x && x_gap > 0.0)
                pc.lipschitz_term = lipschitz_x(*B.f_eps, ts, xi, x_gap) * x_gap;
            pc.ok = pc.d2_sup <= pc.f_sup + pc.lipschitz_term + rep.slack;
            rep.pairs.push_back(pc);
        }
    }

    for (std::size_t l = 0; l + 1 < L; ++l) {
        const CascadeLevel& A = rep.levels[l];
        const CascadeLevel& B = rep.levels[l + 1];
        if (!A.solve.converged || !B.solve.converged) {
            rep.increments_x.push_back(std::numeric_limits<double>::quiet_NaN());
            rep.increments_dx.push_back(std::numeric_limits<double>::quiet_NaN());
            rep.increments_d2x.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        double dx0 = 0.0, dx1 = 0.0;
        for (double t : ts) {
            dx0 = std::max(dx0, std::abs(A.x.eval(t, 0) - B.x.eval(t, 0)));
            dx1 = std::max(dx1, std::abs(A.x.eval(t, 1) - B.x.eval(t, 1)));
        }
        rep.increments_x.push_back(dx0);
        rep.increments_dx.push_back(dx1);
        rep.increments_d2x.push_back(sup_abs_diff(A.f_along, B.f_along));
    }
    return rep;
}

std::vector<std::pair<int, int>> cauchy_check(const CascadeReport& report) {
    std::vector<std::pair<int, int>> violations;
    const std::size_t L = report.levels.size();
    if (L < 2) return violations;

    // re-derive per-level samples from the stored trajectories; a level whose
    // consistency defect grew past its solve-time value is tainted
    std::vector<std::vector<double>> f_along(L);
    std::vector<bool> tainted(L, false);
    for (std::size_t l = 0; l < L; ++l) {
        if (!report.levels[l].solve.converged) continue;
        std::vector<double> xpp;
        level_samples(report, report.levels[l], f_along[l], xpp);
        const double defect_now = sup_abs_diff(xpp, f_along[l]);
        if (defect_now > report.levels[l].galerkin_defect + report.slack) tainted[l] = true;
    }

    for (const PairCheck& pc : report.pairs) {
        const std::size_t i = static_cast<std::size_t>(pc.i);
        const std::size_t j = static_cast<std::size_t>(pc.j);
        if (!report.levels[i].solve.converged || !report.levels[j].solve.converged) continue;
        if (tainted[i] || tainted[j]) {
            violations.emplace_back(pc.i, pc.j);
            continue;
        }
        const double lhs = sup_abs_diff(f_along[i], f_along[j]);
        if (lhs > pc.f_sup + pc.lipschitz_term + report.slack)
            violations.emplace_back(pc.i, pc.j);
    }
    return violations;
}

} // namespace varreg
