#ifndef VARREG_PROBLEM_HPP
#define VARREG_PROBLEM_HPP

#include <memory>
#include <optional>

#include "varreg/basis.hpp"
#include "varreg/lagrangian.hpp"
#include "varreg/quadrature.hpp"

namespace varreg {

// Smooth scalar field g(t, x) with its x-partial; backs the inner
// antiderivative term and the mollified right-hand sides.
struct ScalarField2 {
    virtual ~ScalarField2() = default;
    virtual double value(double t, double x) const = 0;
    virtual double dx(double t, double x) const = 0;
};

// Field from an Expr in (t, y0); dx is the symbolic partial.
class ExprField : public ScalarField2 {
public:
    explicit ExprField(Expr g);
    double value(double t, double x) const override;
    double dx(double t, double x) const override;
    const Expr& expr() const { return g_; }

private:
    Expr g_;
    Expr dgdx_;
    bool has_dx_ = true;
};

// Adds coeff * \int_0^{u(t)} g(t, s) ds to the integrand. The inner integral
// uses a 16-point Gauss rule on [0, u(t)] per quadrature node; its y0-partial
// is coeff * g(t, u(t)) exactly.
struct PotentialTerm {
    std::shared_ptr<const ScalarField2> g;
    double coeff = 1.0;
    int inner_order = 16;
};

struct Problem {
    Problem(LagrangianPtr lagr, BasisPtr basis, Quadrature quad,
            std::optional<PotentialTerm> potential = std::nullopt);

    LagrangianPtr lagr;
    BasisPtr basis;
    Quadrature quad;
    std::optional<PotentialTerm> potential;

    const BoundarySpec& spec() const { return basis->spec; }
    int order() const { return lagr->order(); }

    Trajectory lift_trajectory() const;
};

} // namespace varreg

#endif
