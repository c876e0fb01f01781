#ifndef VARREG_LAGRANGIAN_HPP
#define VARREG_LAGRANGIAN_HPP

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "varreg/expr.hpp"

namespace varreg {

struct NonSmoothError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integrand f(t, y0, ..., yn) of the energy functional, with its symbolic
// partials. First partials are computed on construction; second partials
// lazily (compute-once, race-free). A Lagrangian containing abs is evaluable
// but flagged non-smooth: partial accessors throw NonSmoothError.
class Lagrangian {
public:
    Lagrangian(int order, Expr f);

    int order() const { return order_; }
    const Expr& f() const { return f_; }
    bool smooth() const { return smooth_; }

    // df/dt along the first slot
    const Expr& d_t() const;
    // df/dyk, 0 <= k <= order
    const Expr& d_y(int k) const;
    // d2f/dyj dyk
    const Expr& d2_yy(int j, int k) const;

private:
    void require_smooth() const;

    int order_;
    Expr f_;
    bool smooth_;
    Expr dt_;
    std::vector<Expr> dy_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, int>, Expr> second_;
};

using LagrangianPtr = std::shared_ptr<const Lagrangian>;

} // namespace varreg

#endif
