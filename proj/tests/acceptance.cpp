// Acceptance suite: one line per criterion, exit code = number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "varreg/mollify.hpp"
#include "varreg/regularity.hpp"
#include "varreg/variational.hpp"

using namespace varreg;
namespace fs = std::filesystem;

namespace {

int failures = 0;

struct Criterion {
    std::string name;
    std::chrono::steady_clock::time_point start;
    bool ok = true;
    std::ostringstream detail;

    explicit Criterion(std::string n) : name(std::move(n)), start(std::chrono::steady_clock::now()) {}

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << (detail.str().empty() ? "" : "; ") << what;
        }
    }

    double finish(double budget_seconds) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (budget_seconds > 0 && secs >= budget_seconds) {
            ok = false;
            detail << (detail.str().empty() ? "" : "; ") << "runtime " << secs << "s over budget";
        }
        std::printf("%s %-28s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), secs,
                    detail.str().empty() ? "" : " ", detail.str().c_str());
        if (!ok) ++failures;
        return secs;
    }
};

Problem make_problem(int order, const std::string& lagr_text,
                     const std::map<int, double>& left, const std::map<int, double>& right,
                     int degree = 12) {
    BoundarySpec spec;
    spec.order = order;
    spec.left = left;
    spec.right = right;
    auto lagr = std::make_shared<const Lagrangian>(order, parse(lagr_text));
    return Problem(lagr, build_basis(spec, degree), Quadrature(0.0, 1.0, 32, 5));
}

double sup_error(const Trajectory& u, double (*exact)(double), int deriv = 0) {
    double sup = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double t = i / 2000.0;
        sup = std::max(sup, std::abs(u.eval(t, deriv) - exact(t)));
    }
    return sup;
}

// criterion 1: Euler-Lagrange u'' = 0 with u(0)=0, u(1)=1 has solution t
void criterion_1() {
    Criterion c("1 quadratic-seed");
    Problem p = make_problem(1, "y1^2/2", {{0, 0.0}}, {{0, 1.0}});
    auto [u, rep] = solve_critical(p, p.lift_trajectory(), 1e-10, 100);
    c.require(rep.converged, "solver did not converge");
    c.require(sup_error(u, [](double t) { return t; }) <= 1e-8, "sup|u - t| > 1e-8");
    SampledFunction D = dbr_function(p, u, 1025);
    DbrReport fit = dbr_fit(D, 1);
    c.require(fit.residual <= 1e-10, "dbr residual > 1e-10");
    RecoveryReport rec = recover_highest(p, u, fit);
    c.require(rec.sup_discrepancy <= 1e-9, "recovery discrepancy > 1e-9");
    c.require(rec.failed.empty() && rec.monotonicity_violations.empty(), "recovery failures");
    c.finish(1.0);
}

// criterion 2: u'''' = 0 with clamped data has solution 3t^2 - 2t^3
void criterion_2() {
    Criterion c("2 second-order-beam");
    Problem p = make_problem(2, "y2^2/2", {{0, 0.0}, {1, 0.0}}, {{0, 1.0}, {1, 0.0}});
    auto [u, rep] = solve_critical(p, p.lift_trajectory(), 1e-10, 100);
    c.require(rep.converged, "solver did not converge");
    c.require(sup_error(u, [](double t) { return 3 * t * t - 2 * t * t * t; }) <= 1e-8,
              "sup|u - (3t^2-2t^3)| > 1e-8");
    SampledFunction D = dbr_function(p, u, 1025);
    double dsup = 0.0;
    for (int i = 0; i < D.size(); ++i)
        dsup = std::max(dsup, std::abs(D.values[static_cast<std::size_t>(i)] -
                                       (6 - 12 * D.t(i))));
    c.require(dsup <= 1e-9, "D(t) != 6 - 12t");
    DbrReport fit = dbr_fit(D, 2);
    c.require(fit.residual <= 1e-9, "fit residual > 1e-9");
    RecoveryReport rec = recover_highest(p, u, fit);
    double rsup = 0.0;
    for (int i = 0; i < rec.s.size(); ++i)
        rsup = std::max(rsup, std::abs(rec.s.values[static_cast<std::size_t>(i)] -
                                       u.eval(rec.s.t(i), 2)));
    c.require(rsup <= 1e-8, "recovered s != u'' within 1e-8");
    c.finish(2.0);
}

// criterion 3: the boundary-lift constructor on random full-order data
void criterion_3() {
    Criterion c("3 lift-constructor");
    std::mt19937_64 rng(20260810);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        BoundarySpec spec;
        spec.order = n;
        std::vector<double> u(static_cast<std::size_t>(n) + 1), w(u.size());
        do {
            for (auto& x : u) x = val(rng);
            for (auto& x : w) x = val(rng);
        } while (std::abs(w[0] - u[0]) < 0.1);
        for (int i = 0; i <= n; ++i) {
            spec.left[i] = u[static_cast<std::size_t>(i)];
            spec.right[i] = w[static_cast<std::size_t>(i)];
        }
        Polynomial V = build_lift(spec);
        for (int i = 0; i <= n; ++i) {
            worst = std::max(worst, std::abs(V.eval(0.0, i) - u[static_cast<std::size_t>(i)]) /
                                        (1.0 + std::abs(u[static_cast<std::size_t>(i)])));
            worst = std::max(worst, std::abs(V.eval(1.0, i) - w[static_cast<std::size_t>(i)]) /
                                        (1.0 + std::abs(w[static_cast<std::size_t>(i)])));
        }
    }
    c.require(worst <= 1e-9, "endpoint relative error " + std::to_string(worst));
    c.detail << "worst rel err " << worst;

    BoundarySpec hermite{0.0, 1.0, 1, {{0, 0.0}, {1, 0.0}}, {{0, 1.0}, {1, 0.0}}};
    auto coeffs = build_lift(hermite).t_monomial_coefficients();
    const double expect[4] = {0.0, 0.0, 3.0, -2.0};
    bool coeff_ok = coeffs.size() == 4;
    for (std::size_t i = 0; coeff_ok && i < 4; ++i)
        coeff_ok = std::abs(coeffs[i] - expect[i]) <= 1e-12;
    c.require(coeff_ok, "(0,0)->(1,0) lift is not 3t^2 - 2t^3 coefficientwise");
    c.finish(0.0);
}

// shared fuzz family for criteria 4 and 5
struct Fuzz {
    std::mt19937_64 rng{314159};
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    std::pair<Problem, Trajectory> make() {
        const int order = 1 + static_cast<int>(rng() % 3);
        const int degree = 6 + static_cast<int>(rng() % 5);
        std::ostringstream text;
        const int terms = 2 + static_cast<int>(rng() % 3);
        for (int i = 0; i < terms; ++i) {
            const int k = static_cast<int>(rng() % static_cast<unsigned>(order + 1));
            const int j = static_cast<int>(rng() % static_cast<unsigned>(order + 1));
            if (i) text << " + ";
            text << uniform(-1.0, 1.0) << "*";
            switch (rng() % 5) {
                case 0: text << "y" << k << "^2"; break;
                case 1: text << "y" << k << "*y" << j; break;
                case 2: text << "sin(y" << k << ")"; break;
                case 3: text << "cos(t)*y" << k; break;
                default: text << "exp(y" << k << "/8)"; break;
            }
        }
        Problem p = make_problem(order, text.str(), {{0, uniform(-0.5, 0.5)}},
                                 {{0, uniform(-0.5, 0.5)}}, degree);
        Eigen::VectorXd coeff(p.basis->mode_count());
        for (int i = 0; i < coeff.size(); ++i) coeff(i) = uniform(-0.3, 0.3);
        Trajectory u(p.basis, coeff);
        return {std::move(p), std::move(u)};
    }
};

void criterion_4() {
    Criterion c("4 gateaux-validation");
    Fuzz fz;
    const std::vector<double> rs{1e-3, 5e-4, 2.5e-4};
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        auto [p, u] = fz.make();
        Eigen::VectorXd dir(p.basis->mode_count());
        for (int i = 0; i < dir.size(); ++i) dir(i) = fz.uniform(-1.0, 1.0);
        worst = std::max(worst, gateaux_check(p, u, dir, rs));
    }
    c.require(worst <= 1e-5, "discrepancy " + std::to_string(worst));
    c.detail << "worst discrepancy " << worst;
    c.finish(0.0);
}

void criterion_5() {
    Criterion c("5 gradient-hessian-fd");
    Fuzz fz;
    const double h = 1e-6;
    double worst_g = 0.0, worst_h = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        auto [p, u] = fz.make();
        Eigen::VectorXd g = gradient(p, u);
        Eigen::MatrixXd H = hessian(p, u);
        for (int k = 0; k < g.size(); ++k) {
            Eigen::VectorXd cp = u.coeff, cm = u.coeff;
            cp(k) += h;
            cm(k) -= h;
            Trajectory up(p.basis, cp), um(p.basis, cm);
            const double fd = (objective(p, up) - objective(p, um)) / (2 * h);
            worst_g = std::max(worst_g, std::abs(g(k) - fd) / (1.0 + std::abs(g(k))));
            Eigen::VectorXd gp = gradient(p, up), gm = gradient(p, um);
            for (int l = 0; l < g.size(); ++l)
                worst_h = std::max(worst_h, std::abs(H(k, l) - (gp(l) - gm(l)) / (2 * h)) /
                                                (1.0 + std::abs(H(k, l))));
        }
    }
    c.require(worst_g <= 1e-6, "gradient error " + std::to_string(worst_g));
    c.require(worst_h <= 1e-5, "hessian error " + std::to_string(worst_h));
    c.detail << "grad " << worst_g << ", hess " << worst_h;
    c.finish(0.0);
}

void criterion_6() {
    Criterion c("6 sobolev-embedding");
    std::mt19937_64 rng(1618);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    bool all = true;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        BoundarySpec spec;
        spec.order = n;
        spec.b = 0.5 + static_cast<double>(rng() % 1000) / 500.0;
        spec.left[0] = val(rng);
        spec.right[0] = val(rng);
        BasisPtr basis = build_basis(spec, 5);
        Eigen::VectorXd coeff(basis->mode_count());
        for (int i = 0; i < coeff.size(); ++i) coeff(i) = val(rng);
        Trajectory u(basis, coeff);
        Norms nm = norms(u, n, 129);
        if (!(nm.sobolev <= std::sqrt(spec.b - spec.a) * nm.cn + 1e-12)) all = false;
    }
    c.require(all, "embedding inequality violated");
    c.finish(0.0);
}

void criterion_7() {
    Criterion c("7 non-criticality");
    // u = t is not critical for f = y1^2/2 + y0^2/2; closed-form LSQ oracle
    Problem p = make_problem(1, "y1^2/2 + y0^2/2", {{0, 0.0}}, {{0, 1.0}});
    Trajectory u = p.lift_trajectory();
    SampledFunction D = dbr_function(p, u, 1025);
    DbrReport fit = dbr_fit(D, 1);
    double s0 = 0, s1 = 0, s2 = 0, b0 = 0, b1 = 0;
    for (int i = 0; i < D.size(); ++i) {
        const double t = D.t(i), v = D.values[static_cast<std::size_t>(i)];
        s0 += 1; s1 += t; s2 += t * t; b0 += v; b1 += t * v;
    }
    const double det = s0 * s2 - s1 * s1;
    const double c0 = (s2 * b0 - s1 * b1) / det, c1 = (s0 * b1 - s1 * b0) / det;
    double oracle = 0.0;
    for (int i = 0; i < D.size(); ++i)
        oracle = std::max(oracle,
                          std::abs(D.values[static_cast<std::size_t>(i)] - (c0 + c1 * D.t(i))));
    c.require(!fit.critical, "expected non-critical verdict");
    c.require(fit.residual >= 1e-3, "residual below 1e-3");
    c.require(std::abs(fit.residual - oracle) <= 1e-10, "residual != closed-form oracle");

    // perturbing the seed solution lifts its residual above 1e-4
    Problem seed = make_problem(1, "y1^2/2", {{0, 0.0}}, {{0, 1.0}});
    auto [us, rep] = solve_critical(seed, seed.lift_trajectory(), 1e-10, 100);
    c.require(rep.converged, "seed solve failed");
    DbrReport base = dbr_fit(dbr_function(seed, us, 1025), 1);
    const int K = seed.basis->mode_count();
    Eigen::MatrixXd A(201, K);
    Eigen::VectorXd rhs(201);
    for (int i = 0; i <= 200; ++i) {
        const double t = i / 200.0;
        for (int k = 0; k < K; ++k)
            A(i, k) = seed.basis->modes[static_cast<std::size_t>(k)].eval(t);
        rhs(i) = 1e-3 * std::sin(3 * M_PI * t);
    }
    Trajectory pert(seed.basis, us.coeff + A.colPivHouseholderQr().solve(rhs));
    DbrReport pfit = dbr_fit(dbr_function(seed, pert, 1025), 1);
    c.require(pfit.residual > 1e-4, "perturbed residual not above 1e-4");
    c.require(pfit.residual - base.residual >= 1e-4, "residual rise below eps/10");
    c.finish(0.0);
}

void criterion_8(const std::string& cli) {
    Criterion c("8 hypothesis-violations");
    const fs::path dir = fs::path("acceptance_runs");
    fs::create_directories(dir);
    auto run = [&](const std::string& lagr, const std::string& sub) {
        const fs::path cfgp = dir / (sub + ".ini");
        std::ofstream cfg(cfgp);
        cfg << "[problem]\norder = 1\ninterval = 0 1\nlagrangian = \"" << lagr
            << "\"\n[boundary]\nleft = 0:0\nright = 0:1\n[output]\ndirectory = "
            << (dir / sub).string() << "\n";
        cfg.close();
        const std::string cmd = cli + " recover --config " + cfgp.string() + " 2>" +
                                (dir / (sub + ".stderr")).string();
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    c.require(run("sin(y1)", "sin") == 3, "sin(y1) recover exit code != 3");
    std::ifstream serr(dir / "sin.stderr");
    std::string sin_err((std::istreambuf_iterator<char>(serr)), {});
    c.require(sin_err.find("dpsi/ds") != std::string::npos, "no monotonicity report");

    c.require(run("y1", "lin") == 3, "y1 recover exit code != 3");
    std::ifstream rep(dir / "lin" / "report.txt");
    std::string lin_rep((std::istreambuf_iterator<char>(rep)), {});
    c.require(lin_rep.find("degeneracy scan: 1025 flagged point(s)") != std::string::npos,
              "degeneracy list is not full-grid");
    c.finish(0.0);
}

void criterion_9() {
    Criterion c("9 mollify-cascade");
    CascadeReport rep =
        cascade(parse("abs(t - 1/2)"), {0.25, 0.125, 0.0625, 0.03125}, 0.0, 0.0);
    c.require(rep.levels.size() == 4, "level count");
    for (const auto& lv : rep.levels)
        c.require(lv.solve.converged, "level eps=" + std::to_string(lv.width) + " failed");
    c.require(rep.pairs.size() == 6, "pair count");
    for (const auto& pc : rep.pairs)
        c.require(pc.ok, "pair (" + std::to_string(pc.i) + "," + std::to_string(pc.j) +
                             ") violates the Cauchy bound");
    c.require(cauchy_check(rep).empty(), "cauchy_check reports violations");
    bool decreasing = rep.increments_d2x.size() == 3;
    for (std::size_t i = 1; decreasing && i < rep.increments_d2x.size(); ++i)
        decreasing = rep.increments_d2x[i] < rep.increments_d2x[i - 1];
    c.require(decreasing, "x'' increments not strictly decreasing");
    c.finish(20.0);
}

void criterion_10() {
    Criterion c("10 example36-manufactured");
    // n = 1: F = int[-x'^2 + x^4/4 - int_0^x fo] with fo = 2 x*'' + x*^3
    auto lagr = std::make_shared<const Lagrangian>(1, parse("-y1^2 + 1/4*y0^4"));
    BoundarySpec spec;
    spec.order = 1;
    spec.left[0] = 0.0;
    spec.right[0] = 0.0;
    PotentialTerm pot{std::make_shared<ExprField>(parse("-4 + (t*(1-t))^3")), -1.0, 16};
    Problem p(lagr, build_basis(spec, 12), Quadrature(0.0, 1.0, 32, 5), pot);
    auto [x, rep] = solve_critical(p, p.lift_trajectory(), 1e-10, 100);
    c.require(rep.converged, "solver did not converge");
    c.require(sup_error(x, [](double t) { return t * (1 - t); }) <= 1e-4,
              "sup|x - t(1-t)| > 1e-4");
    c.finish(5.0);
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "./varreg";
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8(cli);
    criterion_9();
    criterion_10();
    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d/10 criteria passed in %.2fs\n", 10 - failures, total);
    return failures;
}
