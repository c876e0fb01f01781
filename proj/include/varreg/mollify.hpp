#ifndef VARREG_MOLLIFY_HPP
#define VARREG_MOLLIFY_HPP

#include <memory>
#include <vector>

#include "varreg/problem.hpp"
#include "varreg/sampled.hpp"
#include "varreg/variational.hpp"

namespace varreg {

// Smoothing of a merely continuous f(t, y0) by convolution with the
// normalized product bump eta_eps(r) = C exp(-1/(1 - (r/eps)^2)) on |r| < eps.
// Values and partials come from convolving with eta and its derivatives; the
// source is extended beyond [a, b] by constant continuation in t.
class MollifiedFunction {
public:
    enum class Part { Value, Dt, Dx, Dxx };

    MollifiedFunction(Expr f, double eps, double a, double b, double x_lo, double x_hi,
                      int order_per_axis = 24, int panels_per_axis = 8);

    double eps() const { return eps_; }
    bool depends_t() const { return dep_t_; }
    bool depends_x() const { return dep_x_; }

    // kernel mass along one axis as the normalization check sees it
    static double kernel_mass_integral(double eps, int order, int panels);

    double eval(double t, double x, Part which) const;
    double value(double t, double x) const { return eval(t, x, Part::Value); }

private:
    struct AxisRule;
    double conv_t(const Expr& g, double t, int deriv) const;
    double conv_x(const Expr& h, double x, int deriv) const;
    double conv_mixed(const Expr& m, double t, double x, int dt, int dx) const;

    Expr f_;
    double eps_;
    double a_, b_;       // t box (= problem interval)
    double x_lo_, x_hi_; // declared x box
    int order_, panels_;
    double inv_mass_; // 1/(eps * I0), computed once per eps
    bool dep_t_ = false, dep_x_ = false;
    std::shared_ptr<const AxisRule> rule_;
    // additive split: t-only terms (plus constants), x-only terms, mixed rest
    Expr part_t_, part_x_, part_mixed_;
    bool t_is_zero_ = false, has_t_ = false, has_x_ = false, has_mixed_ = false;
};

// ScalarField2 view of a mollified function for the variational machinery.
class MollifiedField : public ScalarField2 {
public:
    explicit MollifiedField(std::shared_ptr<const MollifiedFunction> mf) : mf_(std::move(mf)) {}
    double value(double t, double x) const override {
        return mf_->eval(t, x, MollifiedFunction::Part::Value);
    }
    double dx(double t, double x) const override {
        return mf_->eval(t, x, MollifiedFunction::Part::Dx);
    }

private:
    std::shared_ptr<const MollifiedFunction> mf_;
};

struct CascadeOptions {
    double a = 0.0, b = 1.0;
    double x_lo = -2.0, x_hi = 2.0;
    int degree = 12;
    int panels = 32;
    int nodes = 5;
    double tol = 1e-10;
    int max_iter = 100;
    int grid_size = 1025;
    int kernel_order = 24;
    int kernel_panels = 8;
};

struct CascadeLevel {
    double width = 0.0;
    Trajectory x;
    SolveReport solve;
    std::shared_ptr<const MollifiedFunction> f_eps;
    // f_eps(t, x(t)) on the report grid: the weak-solution second derivative
    std::vector<double> f_along;
    // trajectory polynomial second derivative on the grid (diagnostic)
    std::vector<double> xpp_poly;
    // sup |xpp_poly - f_along| at solve time (Galerkin consistency defect)
    double galerkin_defect = 0.0;
};

struct PairCheck {
    int i = 0, j = 0;
    double d2_sup = 0.0;     // ||x_i'' - x_j''||_inf via the weak identity
    double f_sup = 0.0;      // ||f_i - f_j||_inf sampled along x_i
    double lipschitz_term = 0.0; // L_x * ||x_i - x_j||_inf (0 for t-only f)
    bool ok = false;
};

struct CascadeReport {
    std::vector<double> widths;
    std::vector<CascadeLevel> levels;
    std::vector<PairCheck> pairs;
    double slack = 0.0;
    int grid_size = 0;
    double a = 0.0, b = 0.0;
    bool f_depends_x = false;
    // consecutive-level sup increments of x, x', x''
    std::vector<double> increments_x, increments_dx, increments_d2x;
};

// Solves x'' = f_eps(t, x) for each width via the energy functional
// int [x'^2/2 + int_0^x f_eps(t,s) ds] dt and assembles the Cauchy table.
CascadeReport cascade(const Expr& f, const std::vector<double>& widths,
                      double bc_left, double bc_right, const CascadeOptions& opt = {});

// Re-derives the pair norms from the stored trajectories and returns every
// violated pair; a level whose Galerkin defect grew past its solve-time value
// (a tampered trajectory) taints every pair containing it.
std::vector<std::pair<int, int>> cauchy_check(const CascadeReport& report);

} // namespace varreg

#endif
