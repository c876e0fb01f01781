#include "varreg/problem.hpp"

namespace varreg {

ExprField::ExprField(Expr g) : g_(std::move(g)) {
    if (g_.max_y_index() > 0)
        throw std::invalid_argument("ExprField: expression may reference t and y0 only");
    if (g_.contains_abs() && g_.depends_on(0))
        dgdx_ = Expr::constant(0.0); // dx() refuses below
    else
        dgdx_ = g_.differentiate(0);
    has_dx_ = !(g_.contains_abs() && g_.depends_on(0));
}

double ExprField::value(double t, double x) const {
    Bindings env;
    env.set_t(t).set_y(0, x);
    return g_.evaluate(env);
}

double ExprField::dx(double t, double x) const {
    if (!has_dx_)
        throw NonSmoothError("ExprField: abs depends on y0; x-partial refused");
    Bindings env;
    env.set_t(t).set_y(0, x);
    return dgdx_.evaluate(env);
}

Problem::Problem(LagrangianPtr lagr_, BasisPtr basis_, Quadrature quad_,
                 std::optional<PotentialTerm> potential_)
    : lagr(std::move(lagr_)), basis(std::move(basis_)), quad(std::move(quad_)),
      potential(std::move(potential_)) {
    if (!lagr || !basis) throw std::invalid_argument("Problem: null lagrangian or basis");
    if (lagr->order() != basis->spec.order)
        throw std::invalid_argument("Problem: Lagrangian order " +
                                    std::to_string(lagr->order()) +
                                    " != boundary order " +
                                    std::to_string(basis->spec.order));
    if (quad.a != basis->spec.a || quad.b != basis->spec.b)
        throw std::invalid_argument("Problem: quadrature interval != boundary interval");
    if (potential && !potential->g)
        throw std::invalid_argument("Problem: potential term with null field");
}

Trajectory Problem::lift_trajectory() const {
    return Trajectory(basis, Eigen::VectorXd::Zero(basis->mode_count()));
}

} // namespace varreg
