#include "devpatch/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace devpatch {

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (size_t i = coeff.size(); i-- > 0;) acc = acc * x + coeff[i];
    return acc;
}

Polynomial Polynomial::derivative() const {
    Polynomial d;
    if (coeff.size() <= 1) return d;
    d.coeff.resize(coeff.size() - 1);
    for (size_t i = 1; i < coeff.size(); ++i)
        d.coeff[i - 1] = static_cast<double>(i) * coeff[i];
    return d;
}

int Polynomial::degree() const {
    for (size_t i = coeff.size(); i-- > 0;)
        if (coeff[i] != 0.0) return static_cast<int>(i);
    return -1;
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeff) m = std::max(m, std::abs(c));
    return m;
}

void Polynomial::trim(double tol) {
    const double cut = tol * max_abs_coeff();
    while (!coeff.empty() && std::abs(coeff.back()) <= cut) coeff.pop_back();
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    r.coeff.resize(std::max(a.coeff.size(), b.coeff.size()), 0.0);
    for (size_t i = 0; i < a.coeff.size(); ++i) r.coeff[i] += a.coeff[i];
    for (size_t i = 0; i < b.coeff.size(); ++i) r.coeff[i] += b.coeff[i];
    return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    r.coeff.resize(std::max(a.coeff.size(), b.coeff.size()), 0.0);
    for (size_t i = 0; i < a.coeff.size(); ++i) r.coeff[i] += a.coeff[i];
    for (size_t i = 0; i < b.coeff.size(); ++i) r.coeff[i] -= b.coeff[i];
    return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    if (a.coeff.empty() || b.coeff.empty()) return r;
    r.coeff.resize(a.coeff.size() + b.coeff.size() - 1, 0.0);
    for (size_t i = 0; i < a.coeff.size(); ++i)
        for (size_t j = 0; j < b.coeff.size(); ++j)
            r.coeff[i + j] += a.coeff[i] * b.coeff[j];
    return r;
}

Polynomial operator*(double s, const Polynomial& a) {
    Polynomial r = a;
    for (double& c : r.coeff) c *= s;
    return r;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

std::vector<double> bernstein_to_power(std::span<const double> bernstein) {
    const int n = static_cast<int>(bernstein.size()) - 1;
    if (n < 0) return {};
    std::vector<double> m(n + 1, 0.0);
    for (int j = 0; j <= n; ++j) {
        double s = 0.0;
        for (int i = 0; i <= j; ++i) {
            const double term = binomial(j, i) * bernstein[i];
            s += ((j - i) % 2 == 0) ? term : -term;
        }
        m[j] = binomial(n, j) * s;
    }
    return m;
}

namespace {

// Bracketed Newton with bisection fallback. Requires sign(p(lo)) != sign(p(hi)).
double polish_root(const Polynomial& p, const Polynomial& pd, double lo, double hi) {
    double flo = p(lo);
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        const double fx = p(x);
        if (fx == 0.0) return x;
        if ((fx > 0) == (flo > 0))
            lo = x;
        else
            hi = x;
        const double dfx = pd(x);
        double next = (dfx != 0.0) ? x - fx / dfx : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-17 * (1.0 + std::abs(x))) return next;
        x = next;
        if (hi - lo <= 4e-17 * (1.0 + std::abs(lo))) break;
    }
    return x;
}

void push_unique(std::vector<double>& roots, double r) {
    for (double q : roots)
        if (std::abs(q - r) <= 1e-12) return;
    roots.push_back(r);
}

}  // namespace

std::vector<double> real_roots(const Polynomial& p, double lo, double hi, double eps_value) {
    std::vector<double> roots;
    if (lo > hi) return roots;

    Polynomial q = p;
    q.trim(1e-14);
    const int deg = q.degree();
    const double scale = q.max_abs_coeff();
    if (deg <= 0 || scale == 0.0) return roots;  // constant: no isolated roots
    const double ztol = eps_value * scale;

    if (deg == 1) {
        const double r = -q.coeff[0] / q.coeff[1];
        if (r >= lo - 1e-14 && r <= hi + 1e-14) roots.push_back(std::clamp(r, lo, hi));
        return roots;
    }

    // Nodes: interval ends plus the critical points of q inside (lo, hi).
    std::vector<double> nodes{lo};
    const Polynomial qd = q.derivative();
    for (double c : real_roots(qd, lo, hi, eps_value))
        if (c > lo + 1e-15 && c < hi - 1e-15) nodes.push_back(c);
    nodes.push_back(hi);
    std::sort(nodes.begin(), nodes.end());

    // q is strictly monotone between consecutive nodes: at most one root each.
    for (size_t i = 0; i < nodes.size(); ++i) {
        const double fi = q(nodes[i]);
        if (std::abs(fi) <= ztol) {
            push_unique(roots, nodes[i]);
            continue;
        }
        if (i + 1 < nodes.size()) {
            const double fj = q(nodes[i + 1]);
            if (std::abs(fj) > ztol && (fi > 0) != (fj > 0))
                push_unique(roots, polish_root(q, qd, nodes[i], nodes[i + 1]));
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace devpatch
