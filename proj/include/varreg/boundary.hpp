#ifndef VARREG_BOUNDARY_HPP
#define VARREG_BOUNDARY_HPP

#include <map>
#include <stdexcept>

namespace varreg {

// Endpoint-derivative boundary data: u^{(i)}(a) = left[i] for i in N,
// u^{(j)}(b) = right[j] for j in N'.
struct BoundarySpec {
    double a = 0.0;
    double b = 1.0;
    int order = 1;
    std::map<int, double> left;
    std::map<int, double> right;

    void validate() const {
        if (!(a < b)) throw std::invalid_argument("boundary: requires a < b");
        if (order < 1) throw std::invalid_argument("boundary: order must be >= 1");
        for (const auto& [i, v] : left) {
            (void)v;
            if (i < 0 || i > order)
                throw std::invalid_argument("boundary: left index " + std::to_string(i) +
                                            " exceeds order");
        }
        for (const auto& [j, v] : right) {
            (void)v;
            if (j < 0 || j > order)
                throw std::invalid_argument("boundary: right index " + std::to_string(j) +
                                            " exceeds order");
        }
    }

    // N = N' = {0, ..., order}
    bool full_order() const {
        if (static_cast<int>(left.size()) != order + 1) return false;
        if (static_cast<int>(right.size()) != order + 1) return false;
        for (int i = 0; i <= order; ++i)
            if (!left.count(i) || !right.count(i)) return false;
        return true;
    }

    int max_constrained_order() const {
        int m = -1;
        for (const auto& [i, v] : left) { (void)v; m = std::max(m, i); }
        for (const auto& [j, v] : right) { (void)v; m = std::max(m, j); }
        return m;
    }

    bool operator==(const BoundarySpec& o) const {
        return a == o.a && b == o.b && order == o.order && left == o.left &&
               right == o.right;
    }
};

} // namespace varreg

#endif
