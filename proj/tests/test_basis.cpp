#include <doctest.h>

#include <cmath>
#include <random>

#include "varreg/basis.hpp"

using namespace varreg;

namespace {

double rel_err(double got, double want) {
    return std::abs(got - want) / (1.0 + std::abs(want));
}

BoundarySpec full_order_spec(int n, const std::vector<double>& u, const std::vector<double>& w,
                             double a = 0.0, double b = 1.0) {
    BoundarySpec spec;
    spec.a = a;
    spec.b = b;
    spec.order = n;
    for (int i = 0; i <= n; ++i) {
        spec.left[i] = u[static_cast<std::size_t>(i)];
        spec.right[i] = w[static_cast<std::size_t>(i)];
    }
    return spec;
}

} // namespace

TEST_CASE("build_lift: full-order recursion reproduces 3t^2 - 2t^3") {
    BoundarySpec spec = full_order_spec(1, {0.0, 0.0}, {1.0, 0.0});
    Polynomial V = build_lift(spec);
    auto c = V.t_monomial_coefficients();
    REQUIRE(c.size() == 4);
    CHECK(std::abs(c[0] - 0.0) <= 1e-12);
    CHECK(std::abs(c[1] - 0.0) <= 1e-12);
    CHECK(std::abs(c[2] - 3.0) <= 1e-12);
    CHECK(std::abs(c[3] + 2.0) <= 1e-12);
    // all four endpoint conditions by evaluation
    CHECK(V.eval(0.0, 0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(V.eval(0.0, 1) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(V.eval(1.0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(V.eval(1.0, 1) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("build_lift: degenerate w0 = u0 falls back to the interpolating solve") {
    BoundarySpec spec = full_order_spec(1, {0.0, 0.0}, {0.0, 0.0});
    Polynomial V = build_lift(spec);
    for (double t : {0.0, 0.3, 0.7, 1.0}) CHECK(std::abs(V.eval(t)) <= 1e-14);

    // nonzero degenerate data still interpolates
    BoundarySpec spec2 = full_order_spec(1, {1.0, 2.0}, {1.0, -1.0});
    Polynomial V2 = build_lift(spec2);
    CHECK(rel_err(V2.eval(0.0, 0), 1.0) <= 1e-9);
    CHECK(rel_err(V2.eval(0.0, 1), 2.0) <= 1e-9);
    CHECK(rel_err(V2.eval(1.0, 0), 1.0) <= 1e-9);
    CHECK(rel_err(V2.eval(1.0, 1), -1.0) <= 1e-9);
}

TEST_CASE("build_lift: partial index sets") {
    BoundarySpec spec;
    spec.a = -1.0;
    spec.b = 3.0;
    spec.order = 1;
    spec.left[0] = 0.0;
    spec.right[0] = 1.0;
    Polynomial V = build_lift(spec);
    // the line (t - a)/(b - a)
    for (double t : {-1.0, 0.0, 1.0, 3.0})
        CHECK(V.eval(t) == doctest::Approx((t + 1.0) / 4.0).epsilon(1e-13));

    // derivative-only data needs a degree bump past |N|+|N'|-1
    BoundarySpec only_d;
    only_d.order = 2;
    only_d.left[1] = 2.0;
    Polynomial W = build_lift(only_d);
    CHECK(rel_err(W.eval(0.0, 1), 2.0) <= 1e-9);

    BoundarySpec empty;
    empty.order = 1;
    Polynomial Z = build_lift(empty);
    CHECK(Z.eval(0.5) == 0.0);
}

TEST_CASE("build_lift: property over random full-order data") {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        std::vector<double> u(static_cast<std::size_t>(n) + 1), w(u.size());
        do {
            for (auto& x : u) x = val(rng);
            for (auto& x : w) x = val(rng);
        } while (std::abs(w[0] - u[0]) < 0.1);
        BoundarySpec spec = full_order_spec(n, u, w);
        Polynomial V = build_lift(spec);
        for (int i = 0; i <= n; ++i) {
            CHECK(rel_err(V.eval(0.0, i), u[static_cast<std::size_t>(i)]) <= 1e-9);
            CHECK(rel_err(V.eval(1.0, i), w[static_cast<std::size_t>(i)]) <= 1e-9);
        }
    }
}

TEST_CASE("build_basis: mode counts match the constraint rank") {
    BoundarySpec dir;
    dir.order = 1;
    dir.left[0] = 0.0;
    dir.right[0] = 0.0;
    CHECK(build_basis(dir, 3)->mode_count() == 2);
    CHECK(build_basis(dir, 1)->mode_count() == 0);

    BoundarySpec herm;
    herm.order = 2;
    herm.left[0] = herm.left[1] = 0.0;
    herm.right[0] = herm.right[1] = 0.0;
    CHECK(build_basis(herm, 3)->mode_count() == 0);

    // degree below the highest constrained derivative is a misconfiguration
    BoundarySpec high;
    high.order = 2;
    high.left[2] = 1.0;
    CHECK_THROWS_AS(build_basis(high, 1), std::invalid_argument);
}

TEST_CASE("build_basis: modes vanish at constrained orders and are orthonormal") {
    BoundarySpec spec;
    spec.order = 2;
    spec.left[0] = 0.5;
    spec.left[1] = -1.0;
    spec.right[0] = 2.0;
    BasisPtr basis = build_basis(spec, 9);
    CHECK(basis->mode_count() == 10 - 3);
    for (const Polynomial& m : basis->modes) {
        CHECK(std::abs(m.eval(spec.a, 0)) <= 1e-12);
        CHECK(std::abs(m.eval(spec.a, 1)) <= 1e-12);
        CHECK(std::abs(m.eval(spec.b, 0)) <= 1e-12);
    }
    for (int i = 0; i < basis->mode_count(); ++i)
        for (int j = 0; j <= i; ++j) {
            double dot = 0.0;
            const auto& ci = basis->modes[static_cast<std::size_t>(i)].coefficients_s();
            const auto& cj = basis->modes[static_cast<std::size_t>(j)].coefficients_s();
            for (std::size_t k = 0; k < ci.size(); ++k) dot += ci[k] * cj[k];
            CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) <= 1e-12);
        }
}

TEST_CASE("shift identity: lift + mode satisfies the inhomogeneous conditions") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    BoundarySpec spec;
    spec.order = 2;
    spec.a = 0.5;
    spec.b = 2.0;
    spec.left[0] = val(rng);
    spec.left[2] = val(rng);
    spec.right[1] = val(rng);
    BasisPtr basis = build_basis(spec, 10);
    REQUIRE(basis->mode_count() > 0);
    for (const Polynomial& m : basis->modes) {
        Polynomial sum = basis->lift + m;
        CHECK(rel_err(sum.eval(spec.a, 0), spec.left[0]) <= 1e-9);
        CHECK(rel_err(sum.eval(spec.a, 2), spec.left[2]) <= 1e-9);
        CHECK(rel_err(sum.eval(spec.b, 1), spec.right[1]) <= 1e-9);
    }
    // arbitrary coefficient vectors keep the boundary data to 1e-10
    Eigen::VectorXd c(basis->mode_count());
    for (int i = 0; i < c.size(); ++i) c(i) = val(rng);
    Trajectory u(basis, c);
    CHECK(std::abs(u.eval(spec.a, 0) - spec.left[0]) <= 1e-10);
    CHECK(std::abs(u.eval(spec.a, 2) - spec.left[2]) <= 1e-10);
    CHECK(std::abs(u.eval(spec.b, 1) - spec.right[1]) <= 1e-10);
}

TEST_CASE("eval_trajectory: spec examples") {
    BoundarySpec spec = full_order_spec(1, {0.0, 0.0}, {1.0, 0.0});
    BasisPtr basis = build_basis(spec, 5);
    Trajectory u(basis, Eigen::VectorXd::Zero(basis->mode_count()));
    // the lift is 3t^2 - 2t^3; u' = 6t - 6t^2
    CHECK(eval_trajectory(u, 0.5, 1) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(eval_trajectory(u, 0.0, 0) == doctest::Approx(0.0));
    CHECK(eval_trajectory(u, 0.7, 9) == 0.0); // beyond the degree
    CHECK_THROWS_AS(eval_trajectory(u, 1.5, 0), std::domain_error);
    CHECK_THROWS_AS(eval_trajectory(u, -0.1, 0), std::domain_error);
}

TEST_CASE("eval_trajectory: derivative consistency with central differences") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    BoundarySpec spec;
    spec.order = 1;
    spec.left[0] = 0.0;
    spec.right[0] = 1.0;
    BasisPtr basis = build_basis(spec, 8);
    Eigen::VectorXd c(basis->mode_count());
    for (int i = 0; i < c.size(); ++i) c(i) = val(rng);
    Trajectory u(basis, c);
    const double h = 1e-6;
    for (int k = 1; k <= 3; ++k)
        for (double t : {0.2, 0.5, 0.8}) {
            const double fd = (u.eval(t + h, k - 1) - u.eval(t - h, k - 1)) / (2 * h);
            CHECK(std::abs(u.eval(t, k) - fd) / (1.0 + std::abs(u.eval(t, k))) <= 1e-6);
        }
}

TEST_CASE("norms: closed forms and the embedding inequality") {
    BoundarySpec spec;
    spec.order = 1;
    spec.left[0] = 0.0;
    spec.right[0] = 1.0;
    BasisPtr basis = build_basis(spec, 5);
    Trajectory line(basis, Eigen::VectorXd::Zero(basis->mode_count()));
    Norms nm = norms(line, 1, 65);
    CHECK(nm.sobolev == doctest::Approx(1.0 / std::sqrt(3.0) + 1.0).epsilon(1e-13));
    CHECK(nm.cn == doctest::Approx(2.0).epsilon(1e-13));

    BoundarySpec zero;
    zero.order = 1;
    zero.left[0] = 0.0;
    zero.right[0] = 0.0;
    BasisPtr zb = build_basis(zero, 5);
    Trajectory z(zb, Eigen::VectorXd::Zero(zb->mode_count()));
    Norms nz = norms(z, 1, 65);
    CHECK(nz.sobolev == 0.0);
    CHECK(nz.cn == 0.0);

    CHECK_THROWS_AS(norms(line, 1, 64), std::invalid_argument);

    // Sobolev <= sqrt(b-a) * C^n for random degree-5 polynomials
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        BoundarySpec s2;
        s2.order = n;
        s2.a = 0.0;
        s2.b = 0.5 + 2.0 * (static_cast<double>(rng() % 1000) / 1000.0);
        s2.left[0] = val(rng);
        s2.right[0] = val(rng);
        BasisPtr b2 = build_basis(s2, 5);
        Eigen::VectorXd c(b2->mode_count());
        for (int i = 0; i < c.size(); ++i) c(i) = val(rng);
        Trajectory u(b2, c);
        Norms nu = norms(u, n, 129);
        CHECK(nu.sobolev <= std::sqrt(s2.b - s2.a) * nu.cn + 1e-12);
    }
}

TEST_CASE("fit_mode_coefficients reproduces representable targets") {
    BoundarySpec spec;
    spec.order = 1;
    spec.left[0] = 0.0;
    spec.right[0] = 1.0;
    BasisPtr basis = build_basis(spec, 6);
    // target t^2 satisfies the boundary data and lies in the span
    Polynomial target(0.0, 1.0, {0.0, 0.0, 1.0});
    Trajectory u(basis, fit_mode_coefficients(*basis, target));
    for (double t : {0.0, 0.25, 0.6, 1.0})
        CHECK(u.eval(t) == doctest::Approx(t * t).epsilon(1e-11));
}
