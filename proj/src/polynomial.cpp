#include "varreg/polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace varreg {

Polynomial::Polynomial(double a, double b, std::vector<double> coeff_s)
    : a_(a), b_(b), coeff_(std::move(coeff_s)) {
    if (!(a < b)) throw std::invalid_argument("Polynomial requires a < b");
    if (coeff_.empty()) coeff_.push_back(0.0);
}

double Polynomial::eval(double t, int k) const {
    if (k < 0) throw std::invalid_argument("derivative order must be >= 0");
    const int d = degree();
    if (k > d) return 0.0;
    const double s = (t - a_) / (b_ - a_);
    // Horner on the k-th derivative coefficients in s
    double acc = 0.0;
    for (int m = d; m >= k; --m) {
        double fall = 1.0;
        for (int j = 0; j < k; ++j) fall *= static_cast<double>(m - j);
        acc = acc * s + coeff_[static_cast<std::size_t>(m)] * fall;
    }
    double scale = 1.0;
    for (int j = 0; j < k; ++j) scale /= (b_ - a_);
    return acc * scale;
}

void Polynomial::require_same_frame(const Polynomial& o) const {
    if (a_ != o.a_ || b_ != o.b_)
        throw std::invalid_argument("polynomial arithmetic requires matching intervals");
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    require_same_frame(o);
    std::vector<double> c(std::max(coeff_.size(), o.coeff_.size()), 0.0);
    for (std::size_t i = 0; i < coeff_.size(); ++i) c[i] += coeff_[i];
    for (std::size_t i = 0; i < o.coeff_.size(); ++i) c[i] += o.coeff_[i];
    return Polynomial(a_, b_, std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    return *this + o.scaled(-1.0);
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    require_same_frame(o);
    std::vector<double> c(coeff_.size() + o.coeff_.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeff_.size(); ++i)
        for (std::size_t j = 0; j < o.coeff_.size(); ++j)
            c[i + j] += coeff_[i] * o.coeff_[j];
    return Polynomial(a_, b_, std::move(c));
}

Polynomial Polynomial::scaled(double c) const {
    std::vector<double> v = coeff_;
    for (double& x : v) x *= c;
    return Polynomial(a_, b_, std::move(v));
}

std::vector<double> Polynomial::t_monomial_coefficients() const {
    // s^m = ((t-a)/(b-a))^m expanded via repeated multiplication by (t-a)/(b-a)
    const int d = degree();
    std::vector<double> out(static_cast<std::size_t>(d) + 1, 0.0);
    std::vector<double> spow{1.0}; // current s^m in powers of t
    const double inv = 1.0 / (b_ - a_);
    for (int m = 0; m <= d; ++m) {
        for (std::size_t i = 0; i < spow.size(); ++i)
            out[i] += coeff_[static_cast<std::size_t>(m)] * spow[i];
        if (m < d) {
            std::vector<double> next(spow.size() + 1, 0.0);
            for (std::size_t i = 0; i < spow.size(); ++i) {
                next[i + 1] += spow[i] * inv;
                next[i] += spow[i] * (-a_ * inv);
            }
            spow = std::move(next);
        }
    }
    return out;
}

Polynomial Polynomial::zero(double a, double b) { return Polynomial(a, b, {0.0}); }

Polynomial Polynomial::constant(double a, double b, double c) {
    return Polynomial(a, b, {c});
}

Polynomial Polynomial::linear_s(double a, double b, double alpha, double beta) {
    return Polynomial(a, b, {alpha, beta});
}

} // namespace varreg
