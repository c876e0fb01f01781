#include "varreg/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "varreg/emit.hpp"
#include "varreg/mollify.hpp"
#include "varreg/regularity.hpp"
#include "varreg/variational.hpp"

namespace varreg {

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kNoConvergence = 2;
constexpr int kHypothesisViolated = 3;
constexpr int kInternalError = 4;

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

struct Ctx {
    RunConfig cfg;
    std::string dir;
    bool svg = false;
    int grid = 1025;
    std::ostringstream report;
    bool nan_seen = false;

    std::string path(const std::string& name) const { return dir + "/" + name; }

    void flag_nans(const std::vector<Column>& cols) {
        for (const Column& c : cols)
            for (double v : c.values)
                if (std::isnan(v)) { nan_seen = true; return; }
    }

    void finish() {
        if (nan_seen) report << "note: NaN values present in emitted CSV tables\n";
        std::ofstream out(path("report.txt"), std::ios::binary);
        out << report.str();
    }
};

Ctx make_ctx(const RunConfig& cfg, const RunOptions& opt) {
    Ctx ctx;
    ctx.cfg = cfg;
    ctx.dir = opt.out_dir.empty() ? cfg.directory : opt.out_dir;
    ctx.svg = opt.svg;
    for (const std::string& f : cfg.formats)
        if (f == "svg") ctx.svg = true;
    ctx.grid = opt.grid_override > 0 ? opt.grid_override : cfg.grid;
    if (ctx.grid < 257 || ctx.grid % 2 == 0)
        throw ConfigError("grid must be odd and >= 257");
    std::filesystem::create_directories(ctx.dir);
    return ctx;
}

Problem build_problem(const RunConfig& cfg) {
    BoundarySpec spec{cfg.a, cfg.b, cfg.order, cfg.left, cfg.right};
    spec.validate();
    auto lagr = std::make_shared<const Lagrangian>(cfg.order, parse(cfg.lagrangian));
    BasisPtr basis = build_basis(spec, cfg.degree);
    return Problem(lagr, basis, Quadrature(cfg.a, cfg.b, cfg.panels, cfg.nodes));
}

std::vector<double> grid_of(const Ctx& ctx, double a, double b) {
    std::vector<double> t(static_cast<std::size_t>(ctx.grid));
    for (int i = 0; i < ctx.grid; ++i)
        t[static_cast<std::size_t>(i)] = a + (b - a) * i / (ctx.grid - 1);
    return t;
}

void write_solution(Ctx& ctx, const Problem& p, const Trajectory& u) {
    const auto ts = grid_of(ctx, p.spec().a, p.spec().b);
    std::vector<Column> cols;
    cols.push_back({"t", ts});
    for (int k = 0; k <= p.order(); ++k) {
        Column c{"u" + std::to_string(k), {}};
        c.values.reserve(ts.size());
        for (double t : ts) c.values.push_back(u.eval(t, k));
        cols.push_back(std::move(c));
    }
    ctx.flag_nans(cols);
    emit_csv(cols, ctx.path("solution.csv"));
    if (ctx.svg) emit_svg({{"u", ts, cols[1].values}}, ctx.path("solution.svg"), "solution");
}

void report_solve(Ctx& ctx, const SolveReport& rep) {
    ctx.report << "solve: converged=" << (rep.converged ? "yes" : "no")
               << " iterations=" << rep.iterations << " grad_sup=" << num(rep.grad_norm)
               << " objective=" << num(rep.objective) << "\n";
    if (!rep.message.empty()) ctx.report << "solve note: " << rep.message << "\n";
}

void report_norms(Ctx& ctx, const Problem& p, const Trajectory& u) {
    Norms nm = norms(u, p.order(), std::max(65, ctx.grid));
    ctx.report << "norms: sobolev=" << num(nm.sobolev) << " cn=" << num(nm.cn)
               << " embedding_bound=" << num(std::sqrt(p.spec().b - p.spec().a) * nm.cn)
               << "\n";
}

struct Diagnosis {
    SampledFunction D;
    DbrReport fit;
    std::vector<std::pair<double, double>> degeneracies;
};

Diagnosis diagnose_problem(Ctx& ctx, const Problem& p, const Trajectory& u) {
    SampledFunction D = dbr_function(p, u, ctx.grid);
    DbrReport fit = dbr_fit(D, p.order());
    auto degen = degeneracy_scan(p, u, ctx.grid);
    ctx.report << "dbr: residual=" << num(fit.residual) << " tolerance=" << num(fit.tolerance)
               << " verdict=" << (fit.critical ? "critical" : "non-critical") << "\n";
    ctx.report << "dbr fit coefficients (powers of t):";
    for (double c : fit.coefficients_t) ctx.report << " " << num(c);
    ctx.report << "\n";
    ctx.report << "degeneracy scan: " << degen.size() << " flagged point(s)";
    if (!degen.empty()) {
        ctx.report << " (|d2f/dy_n^2| <= 1e-08):";
        const std::size_t show = std::min<std::size_t>(degen.size(), 8);
        for (std::size_t i = 0; i < show; ++i)
            ctx.report << " t=" << num(degen[i].first);
        if (degen.size() > show) ctx.report << " ...";
    }
    ctx.report << "\n";
    return Diagnosis{std::move(D), std::move(fit), std::move(degen)};
}

void write_regularity(Ctx& ctx, const Problem& p, const Trajectory& u, const Diagnosis& dg,
                      const RecoveryReport* rec) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const int M = dg.D.size();
    std::vector<double> ts(static_cast<std::size_t>(M));
    std::vector<double> fitv(ts.size()), resv(ts.size()), srec(ts.size(), nan),
        un(ts.size()), psis(ts.size(), nan);
    for (int i = 0; i < M; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        ts[k] = dg.D.t(i);
        fitv[k] = dg.fit.fit.eval(ts[k]);
        resv[k] = dg.D.values[k] - fitv[k];
        un[k] = u.eval(ts[k], p.order());
        if (rec) {
            srec[k] = rec->s.values[k];
            if (!std::isnan(srec[k])) {
                Bindings env;
                env.set_t(ts[k]);
                for (int j = 0; j < p.order(); ++j) env.set_y(j, u.eval(ts[k], j));
                env.set_y(p.order(), srec[k]);
                psis[k] = p.lagr->d2_yy(p.order(), p.order()).evaluate(env);
            }
        }
    }
    std::vector<Column> cols{{"t", ts},          {"D", dg.D.values}, {"p_fit", fitv},
                             {"D_minus_fit", resv}, {"s_recovered", srec}, {"u_n", un},
                             {"psi_s", psis}};
    ctx.flag_nans(cols);
    emit_csv(cols, ctx.path("regularity.csv"));
    if (ctx.svg) {
        emit_svg({{"D - p", ts, resv}}, ctx.path("dbr.svg"), "du Bois-Reymond residual");
        if (rec)
            emit_svg({{"s", ts, srec}, {"u_n", ts, un}}, ctx.path("recovery.svg"),
                     "recovered highest derivative");
    }
}

int cmd_solve(Ctx& ctx) {
    Problem p = build_problem(ctx.cfg);
    auto [u, rep] = solve_critical(p, p.lift_trajectory(), ctx.cfg.tol, ctx.cfg.max_iter);
    report_solve(ctx, rep);
    report_norms(ctx, p, u);
    write_solution(ctx, p, u);
    ctx.finish();
    if (!rep.converged) {
        std::cerr << "solve: no convergence: " << rep.message << "\n";
        return kNoConvergence;
    }
    return kOk;
}

int cmd_diagnose(Ctx& ctx) {
    Problem p = build_problem(ctx.cfg);
    auto [u, rep] = solve_critical(p, p.lift_trajectory(), ctx.cfg.tol, ctx.cfg.max_iter);
    report_solve(ctx, rep);
    report_norms(ctx, p, u);
    write_solution(ctx, p, u);
    if (!rep.converged) {
        ctx.finish();
        std::cerr << "diagnose: no convergence: " << rep.message << "\n";
        return kNoConvergence;
    }
    Diagnosis dg = diagnose_problem(ctx, p, u);
    write_regularity(ctx, p, u, dg, nullptr);
    ctx.finish();
    if (!dg.degeneracies.empty()) {
        std::cerr << "diagnose: Hilbert-Weierstrass degeneracy at " << dg.degeneracies.size()
                  << " grid point(s)\n";
        return kHypothesisViolated;
    }
    return kOk;
}

int cmd_recover(Ctx& ctx) {
    Problem p = build_problem(ctx.cfg);
    auto [u, rep] = solve_critical(p, p.lift_trajectory(), ctx.cfg.tol, ctx.cfg.max_iter);
    report_solve(ctx, rep);
    report_norms(ctx, p, u);
    write_solution(ctx, p, u);
    if (!rep.converged) {
        ctx.finish();
        std::cerr << "recover: no convergence: " << rep.message << "\n";
        return kNoConvergence;
    }
    Diagnosis dg = diagnose_problem(ctx, p, u);
    if (!dg.degeneracies.empty()) {
        ctx.report << "recover: blocked by degeneracy (" << dg.degeneracies.size()
                   << " grid point(s) with |d2f/dy_n^2| <= 1e-08)\n";
        write_regularity(ctx, p, u, dg, nullptr);
        ctx.finish();
        std::cerr << "recover: hypothesis violated: degeneracy list has "
                  << dg.degeneracies.size() << " point(s)\n";
        return kHypothesisViolated;
    }
    if (!dg.fit.critical) {
        write_regularity(ctx, p, u, dg, nullptr);
        ctx.report << "recover: dbr verdict non-critical; recovery not applicable\n";
        ctx.finish();
        std::cerr << "recover: dbr verdict non-critical at a converged solve\n";
        return kInternalError;
    }
    RecoveryReport rec = recover_highest(p, u, dg.fit);
    ctx.report << "recovery: max_root_residual=" << num(rec.max_root_residual)
               << " sup|s - u_n|=" << num(rec.sup_discrepancy)
               << " monotonicity_violations=" << rec.monotonicity_violations.size()
               << " failed_points=" << rec.failed.size() << "\n";
    ctx.report << "modulus of continuity (gap, max |s(t+gap*h) - s(t)|):";
    for (const auto& [gap, w] : rec.modulus_of_continuity)
        ctx.report << " (" << gap << ", " << num(w) << ")";
    ctx.report << "\n";
    write_regularity(ctx, p, u, dg, &rec);
    ctx.finish();
    if (!rec.monotonicity_violations.empty()) {
        std::cerr << "recover: hypothesis violated: dpsi/ds <= 0 sampled at "
                  << rec.monotonicity_violations.size() << " point(s), first at t="
                  << rec.monotonicity_violations.front().first << "\n";
        return kHypothesisViolated;
    }
    if (!rec.failed.empty()) {
        std::cerr << "recover: hypothesis violated: " << rec.failed.size()
                  << " grid point(s) failed (" << rec.failed.front().reason << ")\n";
        return kHypothesisViolated;
    }
    return kOk;
}

int cmd_mollify(Ctx& ctx) {
    Expr f = parse(ctx.cfg.lagrangian);
    if (f.max_y_index() > 0)
        throw ConfigError("mollify: the source must be an expression in (t, y0)");
    for (const auto& [k, v] : ctx.cfg.left) {
        (void)v;
        if (k != 0) throw ConfigError("mollify: only Dirichlet (order 0) data supported");
    }
    for (const auto& [k, v] : ctx.cfg.right) {
        (void)v;
        if (k != 0) throw ConfigError("mollify: only Dirichlet (order 0) data supported");
    }
    const double bl = ctx.cfg.left.count(0) ? ctx.cfg.left.at(0) : 0.0;
    const double br = ctx.cfg.right.count(0) ? ctx.cfg.right.at(0) : 0.0;
    CascadeOptions opt;
    opt.a = ctx.cfg.a;
    opt.b = ctx.cfg.b;
    opt.x_lo = ctx.cfg.box_lo;
    opt.x_hi = ctx.cfg.box_hi;
    opt.degree = ctx.cfg.degree;
    opt.panels = ctx.cfg.panels;
    opt.nodes = ctx.cfg.nodes;
    opt.tol = ctx.cfg.tol;
    opt.max_iter = ctx.cfg.max_iter;
    opt.grid_size = ctx.grid;

    CascadeReport rep = cascade(f, ctx.cfg.widths, bl, br, opt);

    const auto ts = grid_of(ctx, opt.a, opt.b);
    std::vector<Column> cols{{"t", ts}};
    for (std::size_t l = 0; l < rep.levels.size(); ++l) {
        const auto& lv = rep.levels[l];
        Column cx{"x_" + std::to_string(l + 1), {}};
        for (double t : ts) cx.values.push_back(lv.x.eval(t, 0));
        cols.push_back(std::move(cx));
        cols.push_back({"xpp_" + std::to_string(l + 1), lv.f_along});
        ctx.report << "level " << (l + 1) << ": eps=" << num(lv.width)
                   << " converged=" << (lv.solve.converged ? "yes" : "no")
                   << " grad_sup=" << num(lv.solve.grad_norm)
                   << " galerkin_defect=" << num(lv.galerkin_defect) << "\n";
    }
    ctx.flag_nans(cols);
    emit_csv(cols, ctx.path("cascade.csv"));

    ctx.report << "slack=" << num(rep.slack) << "\n";
    for (const PairCheck& pc : rep.pairs)
        ctx.report << "pair (" << (pc.i + 1) << "," << (pc.j + 1)
                   << "): |x_i''-x_j''|=" << num(pc.d2_sup) << " |f_i-f_j|=" << num(pc.f_sup)
                   << " lipschitz_term=" << num(pc.lipschitz_term)
                   << " ok=" << (pc.ok ? "yes" : "no") << "\n";
    auto viol = cauchy_check(rep);
    ctx.report << "cauchy violations: " << viol.size() << "\n";
    ctx.report << "increments x'':";
    for (double v : rep.increments_d2x) ctx.report << " " << num(v);
    ctx.report << "\n";
    if (ctx.svg) {
        std::vector<Series> ss;
        for (std::size_t l = 0; l < rep.levels.size(); ++l)
            ss.push_back({"x_" + std::to_string(l + 1), ts, cols[1 + 2 * l].values});
        emit_svg(ss, ctx.path("cascade.svg"), "mollification cascade");
    }
    ctx.finish();
    for (const auto& lv : rep.levels)
        if (!lv.solve.converged) {
            std::cerr << "mollify: level eps=" << lv.width << " failed to converge\n";
            return kNoConvergence;
        }
    return kOk;
}

int cmd_example36(Ctx& ctx, int n) {
    if (n < 1 || n > 8) throw ConfigError("example36: --n must be in [1, 8]");
    // F(x) = int [ (-1)^n/2 |x^(n)|^2 - 1/2 |x'|^2 + 1/4 |x|^4 - int_0^x fo(t,s) ds ] dt
    // on [0,1] with x(0) = x(1) = 0; forcing manufactured from x*(t) = t(1-t).
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    Expr y0 = Expr::variable(0), y1 = Expr::variable(1), yn = Expr::variable(n);
    Expr flagr = Expr::constant(sign * 0.5) * Expr::pow(yn, 2) -
                 Expr::constant(0.5) * Expr::pow(y1, 2) +
                 Expr::constant(0.25) * Expr::pow(y0, 4);
    // x*(2n) + x*'' + x*^3 with x* = t(1-t): the 2n-th derivative term is -2
    // only when n = 1 (degree 2), zero otherwise
    Expr forcing = parse(n == 1 ? "-4 + (t*(1-t))^3" : "-2 + (t*(1-t))^3");

    BoundarySpec spec;
    spec.a = 0.0;
    spec.b = 1.0;
    spec.order = n;
    spec.left[0] = 0.0;
    spec.right[0] = 0.0;
    auto lagr = std::make_shared<const Lagrangian>(n, flagr);
    BasisPtr basis = build_basis(spec, ctx.cfg.degree);
    PotentialTerm pot{std::make_shared<ExprField>(forcing), -1.0, 16};
    Problem p(lagr, basis, Quadrature(0.0, 1.0, ctx.cfg.panels, ctx.cfg.nodes), pot);

    auto [x, rep] = solve_critical(p, p.lift_trajectory(), ctx.cfg.tol, ctx.cfg.max_iter);
    report_solve(ctx, rep);
    const auto ts = grid_of(ctx, 0.0, 1.0);
    std::vector<double> xv, xs, err;
    double sup = 0.0;
    for (double t : ts) {
        const double v = x.eval(t, 0);
        const double star = t * (1.0 - t);
        xv.push_back(v);
        xs.push_back(star);
        err.push_back(v - star);
        sup = std::max(sup, std::abs(v - star));
    }
    ctx.report << "example36: n=" << n << " sup|x - x*|=" << num(sup) << "\n";
    if (rep.converged && sup > 1e-3)
        ctx.report << "example36 note: the solve converged to a different critical point; "
                      "for n >= 2 the reference x* = t(1-t) violates the natural boundary "
                      "conditions of the Dirichlet-only functional (x''(0) = -2), so it is "
                      "not itself a critical point\n";
    std::vector<Column> cols{{"t", ts}, {"x", xv}, {"x_star", xs}, {"error", err}};
    ctx.flag_nans(cols);
    emit_csv(cols, ctx.path("solution.csv"));
    if (ctx.svg)
        emit_svg({{"x", ts, xv}, {"x_star", ts, xs}}, ctx.path("solution.svg"),
                 "manufactured solution");
    ctx.finish();
    if (!rep.converged) {
        std::cerr << "example36: no convergence: " << rep.message << "\n";
        return kNoConvergence;
    }
    return kOk;
}

} // namespace

int run_selftest() {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS " : "FAIL ") << name;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    };
    try {
        {
            BoundarySpec spec{0.0, 1.0, 1, {{0, 0.0}, {1, 0.0}}, {{0, 1.0}, {1, 0.0}}};
            Polynomial lift = build_lift(spec);
            auto c = lift.t_monomial_coefficients();
            const double expect[4] = {0.0, 0.0, 3.0, -2.0};
            double worst = 0.0;
            for (std::size_t i = 0; i < 4 && i < c.size(); ++i)
                worst = std::max(worst, std::abs(c[i] - expect[i]));
            check("lift-recursion", c.size() == 4 && worst <= 1e-12,
                  "worst coeff err " + num(worst));
        }
        {
            BoundarySpec spec{0.0, 1.0, 1, {{0, 0.0}}, {{0, 1.0}}};
            auto lagr = std::make_shared<const Lagrangian>(1, parse("y1^2/2"));
            Problem p(lagr, build_basis(spec, 12), Quadrature(0, 1, 32, 5));
            auto [u, rep] = solve_critical(p, p.lift_trajectory());
            double sup = 0.0;
            for (int i = 0; i <= 512; ++i) {
                const double t = i / 512.0;
                sup = std::max(sup, std::abs(u.eval(t, 0) - t));
            }
            SampledFunction D = dbr_function(p, u, 1025);
            DbrReport fit = dbr_fit(D, 1);
            RecoveryReport rec = recover_highest(p, u, fit);
            check("quadratic-seed", rep.converged && sup <= 1e-8 && fit.residual <= 1e-10 &&
                                        rec.sup_discrepancy <= 1e-9,
                  "sup " + num(sup) + " dbr " + num(fit.residual));
        }
        {
            BoundarySpec spec{0.0, 1.0, 2, {{0, 0.0}, {1, 0.0}}, {{0, 1.0}, {1, 0.0}}};
            auto lagr = std::make_shared<const Lagrangian>(2, parse("y2^2/2"));
            Problem p(lagr, build_basis(spec, 12), Quadrature(0, 1, 32, 5));
            auto [u, rep] = solve_critical(p, p.lift_trajectory());
            double sup = 0.0;
            for (int i = 0; i <= 512; ++i) {
                const double t = i / 512.0;
                sup = std::max(sup, std::abs(u.eval(t, 0) - (3 * t * t - 2 * t * t * t)));
            }
            check("beam", rep.converged && sup <= 1e-8, "sup " + num(sup));
        }
        {
            BoundarySpec spec{0.0, 1.0, 1, {{0, 0.0}}, {{0, 1.0}}};
            BasisPtr basis = build_basis(spec, 12);
            Trajectory u(basis, Eigen::VectorXd::Zero(basis->mode_count()));
            Norms nm = norms(u, 1, 129); // u(t) = t
            const double expect = 1.0 / std::sqrt(3.0) + 1.0;
            check("norms", std::abs(nm.sobolev - expect) <= 1e-12 && std::abs(nm.cn - 2.0) <= 1e-12,
                  "sobolev " + num(nm.sobolev) + " cn " + num(nm.cn));
        }
        {
            Quadrature q(0.0, 2.5, 32, 5);
            double sum = 0.0;
            for (double w : q.weights) sum += w;
            check("quadrature-weights", std::abs(sum - 2.5) <= 1e-13, "sum " + num(sum));
        }
        {
            const double mass = MollifiedFunction::kernel_mass_integral(0.1, 24, 8);
            check("kernel-mass", std::abs(mass - 1.0) <= 1e-10, "mass " + num(mass));
        }
    } catch (const std::exception& e) {
        check("selftest-exception", false, e.what());
    }
    return failures == 0 ? kOk : kInternalError;
}

int run_command(const std::string& command, const RunConfig& cfg, const RunOptions& opt) {
    try {
        if (command == "selftest") return run_selftest();
        Ctx ctx = make_ctx(cfg, opt);
        if (command == "solve") return cmd_solve(ctx);
        if (command == "diagnose") return cmd_diagnose(ctx);
        if (command == "recover") return cmd_recover(ctx);
        if (command == "mollify") return cmd_mollify(ctx);
        if (command == "example36") return cmd_example36(ctx, opt.example36_n);
        std::cerr << "unknown command '" << command << "'\n";
        return kConfigError;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kConfigError;
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis violated: " << e.what() << "\n";
        return kHypothesisViolated;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
}

} // namespace varreg
