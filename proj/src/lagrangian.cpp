#include "varreg/lagrangian.hpp"

namespace varreg {

Lagrangian::Lagrangian(int order, Expr f) : order_(order), f_(std::move(f)) {
    if (order_ < 1 || order_ > kMaxYIndex)
        throw std::invalid_argument("Lagrangian order must be in [1, " +
                                    std::to_string(kMaxYIndex) + "]");
    if (f_.max_y_index() > order_)
        throw std::invalid_argument("Lagrangian references y" +
                                    std::to_string(f_.max_y_index()) +
                                    " beyond its order " + std::to_string(order_));
    smooth_ = !f_.contains_abs();
    if (smooth_) {
        dt_ = f_.differentiate(kVarT);
        dy_.reserve(order_ + 1);
        for (int k = 0; k <= order_; ++k) dy_.push_back(f_.differentiate(k));
    }
}

void Lagrangian::require_smooth() const {
    if (!smooth_)
        throw NonSmoothError("Lagrangian contains abs; symbolic partials refused "
                             "(mollify first)");
}

const Expr& Lagrangian::d_t() const {
    require_smooth();
    return dt_;
}

const Expr& Lagrangian::d_y(int k) const {
    require_smooth();
    if (k < 0 || k > order_)
        throw std::invalid_argument("partial index out of range: " + std::to_string(k));
    return dy_[static_cast<std::size_t>(k)];
}

const Expr& Lagrangian::d2_yy(int j, int k) const {
    require_smooth();
    if (j < 0 || j > order_ || k < 0 || k > order_)
        throw std::invalid_argument("second partial index out of range");
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(j, k);
    auto it = second_.find(key);
    if (it == second_.end())
        it = second_.emplace(key, dy_[static_cast<std::size_t>(k)].differentiate(j)).first;
    return it->second;
}

} // namespace varreg
