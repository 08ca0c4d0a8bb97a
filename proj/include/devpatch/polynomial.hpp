#pragma once
// Dense univariate real polynomials in the power basis, plus real-root
// isolation on an interval.

#include <span>
#include <vector>

namespace devpatch {

// coeff[i] multiplies x^i. An empty coefficient list is the zero polynomial.
struct Polynomial {
    std::vector<double> coeff;

    Polynomial() = default;
    explicit Polynomial(std::vector<double> c) : coeff(std::move(c)) {}

    double operator()(double x) const;
    Polynomial derivative() const;

    // Index of the last coefficient with |c| > 0, or -1 for the zero polynomial.
    int degree() const;
    double max_abs_coeff() const;

    // Drop trailing coefficients with |c| <= tol * max_abs_coeff().
    void trim(double tol);
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(double s, const Polynomial& a);

// Exact conversion of Bernstein coefficients on [0,1] to power-basis
// coefficients: m_j = C(n,j) * sum_{i<=j} (-1)^{j-i} C(j,i) b_i.
std::vector<double> bernstein_to_power(std::span<const double> bernstein);

// Binomial coefficients as doubles (exact for n <= 52).
double binomial(int n, int k);

// All real roots of p in [lo, hi], sorted ascending and deduplicated.
// Roots are isolated by recursing on the critical points of p (between two
// consecutive critical points the polynomial is monotone) and refined with
// bracketed Newton/bisection until |p(r)| <= eps_value * max_abs_coeff or the
// bracket collapses. Touching roots (even multiplicity) are picked up at
// critical points where |p| falls below the same threshold.
std::vector<double> real_roots(const Polynomial& p, double lo, double hi,
                               double eps_value = 1e-12);

}  // namespace devpatch
