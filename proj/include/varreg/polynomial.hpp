#ifndef VARREG_POLYNOMIAL_HPP
#define VARREG_POLYNOMIAL_HPP

#include <vector>

namespace varreg {

// Polynomial in the shifted variable s = (t - a)/(b - a). Derivatives of any
// order in t are exact (chain-rule factor (b-a)^{-k}).
class Polynomial {
public:
    Polynomial(double a, double b, std::vector<double> coeff_s);

    double a() const { return a_; }
    double b() const { return b_; }
    int degree() const { return static_cast<int>(coeff_.size()) - 1; }
    const std::vector<double>& coefficients_s() const { return coeff_; }

    // k-th derivative in t; k beyond the degree gives 0
    double eval(double t, int k = 0) const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial scaled(double c) const;

    // expansion in powers of t (binomial expansion of s^m)
    std::vector<double> t_monomial_coefficients() const;

    static Polynomial zero(double a, double b);
    static Polynomial constant(double a, double b, double c);
    // alpha + beta*(t - a)/(b - a)
    static Polynomial linear_s(double a, double b, double alpha, double beta);

private:
    void require_same_frame(const Polynomial& o) const;
    double a_, b_;
    std::vector<double> coeff_; // c0 + c1 s + ... + cD s^D
};

} // namespace varreg

#endif
