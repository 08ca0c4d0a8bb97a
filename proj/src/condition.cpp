#include "devpatch/condition.hpp"

#include <cmath>
#include <stdexcept>

namespace devpatch {

namespace {

constexpr double kDegenerateRel = 1e-12;
constexpr double kObservedDegreeCut = 1e-10;

}  // namespace

double ConditionPolynomial::evaluate(double s) const {
    double acc = 0.0;
    for (size_t i = coefficients.size(); i-- > 0;) acc = acc * s + coefficients[i];
    return acc;
}

int ConditionPolynomial::observed_degree() const {
    for (size_t i = coefficients.size(); i-- > 0;) {
        if (std::abs(coefficients[i]) > kObservedDegreeCut) return static_cast<int>(i);
    }
    return -1;
}

PowerSpan PowerSpan::from_bezier(const NurbsCurve& span) {
    if (!span.single_span()) {
        throw std::invalid_argument("PowerSpan requires a single-span (Bezier) curve");
    }
    PowerSpan out;
    out.u0 = span.t_min();
    out.u1 = span.t_max();

    const auto& cps = span.control_points();
    const int n = span.degree();
    std::vector<double> bx(n + 1), by(n + 1), bz(n + 1), bw(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double w = cps[i].weight;
        bx[i] = w * cps[i].position.x();
        by[i] = w * cps[i].position.y();
        bz[i] = w * cps[i].position.z();
        bw[i] = w;
    }
    out.x = Polynomial(bernstein_to_power(bx));
    out.y = Polynomial(bernstein_to_power(by));
    out.z = Polynomial(bernstein_to_power(bz));
    out.w = Polynomial(bernstein_to_power(bw));

    std::vector<Vec3> D(n + 1);
    for (int i = 0; i <= n; ++i) D[i] = Vec3(out.x.coeff[i], out.y.coeff[i], out.z.coeff[i]);
    const std::vector<double>& wc = out.w.coeff;

    const int slots = std::max(2 * n - 1, 0);
    out.F.assign(slots, Vec3::Zero());
    out.E.assign(slots, Vec3::Zero());
    // F(s) = D'(s) x D(s): slot k collects pairs i + j = k + 1 with the
    // antisymmetric integer weight (i - j), so powers above 2n-2 never
    // receive a term at all.
    for (int i = 1; i <= n; ++i) {
        for (int j = 0; j < i; ++j) {
            const int k = i + j - 1;
            const Vec3 term = double(i - j) * D[i].cross(D[j]);
            out.F[k] += term;
            out.ref_f += double(i - j) * D[i].norm() * D[j].norm();
        }
    }
    // E(s) = w'(s) D(s) - w(s) D'(s): slot k collects i + j = k + 1 with
    // weight (i - j), i indexing w and j indexing D.
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            if (i == j) continue;
            const int k = i + j - 1;
            if (k < 0 || k >= slots) continue;
            out.E[k] += double(i - j) * wc[i] * D[j];
            out.ref_e += std::abs(double(i - j) * wc[i]) * D[j].norm();
        }
    }
    return out;
}

Vec3 PowerSpan::point(double s) const {
    return Vec3(x(s), y(s), z(s)) / w(s);
}

ConditionPolynomial assemble_condition(const Vec3& c_point, const Vec3& c_vel,
                                       const PowerSpan& dspan, double t) {
    ConditionPolynomial out;
    out.t_value = t;
    out.span_start = dspan.u0;
    out.span_end = dspan.u1;
    out.coefficients.assign(dspan.F.size(), 0.0);

    double scale = 0.0;
    for (size_t k = 0; k < dspan.F.size(); ++k) {
        const double value =
            c_vel.dot(dspan.F[k]) + c_vel.dot(dspan.E[k].cross(c_point));
        out.coefficients[k] = value;
        scale = std::max(scale, std::abs(value));
    }
    out.scale = scale;

    const double ref =
        c_vel.norm() * (dspan.ref_f + dspan.ref_e * (1.0 + c_point.norm()));
    out.degenerate = scale <= kDegenerateRel * ref || ref == 0.0 || scale == 0.0;
    if (!out.degenerate) {
        for (double& c : out.coefficients) c /= scale;
    }
    return out;
}

ConditionPolynomial condition_polynomial(const NurbsCurve& c, const NurbsCurve& d, double t) {
    if (!d.single_span()) {
        throw std::invalid_argument(
            "condition_polynomial requires a single-span directrix; extract Bezier spans first");
    }
    const PowerSpan span = PowerSpan::from_bezier(d);
    return assemble_condition(c.evaluate(t), c.derivative(t, 1), span, t);
}

double triple_product(const NurbsCurve& c, const NurbsCurve& d, double t, double T) {
    const Vec3 cp = c.derivative(t, 1);
    const Vec3 dd = d.derivative(T, 1);
    const Vec3 diff = d.evaluate(T) - c.evaluate(t);
    return cp.dot(dd.cross(diff));
}

std::optional<double> reparam_derivative(const NurbsCurve& c, const NurbsCurve& d, double t,
                                         double T) {
    const Vec3 cp = c.derivative(t, 1);
    const Vec3 cpp = c.derivative(t, 2);
    const Vec3 dd = d.derivative(T, 1);
    const Vec3 ddd = d.derivative(T, 2);
    const Vec3 diff = d.evaluate(T) - c.evaluate(t);

    const double num = cpp.dot(dd.cross(diff));
    const double den = ddd.dot(cp.cross(diff));
    const double den_scale = 1.0 + ddd.norm() * cp.norm() * diff.norm();
    if (std::abs(den) <= 1e-10 * den_scale) return std::nullopt;
    return num / den;
}

CurvatureSignature curvature_signature(const NurbsCurve& c, const NurbsCurve& d, double t,
                                       double T, const Vec3& normal) {
    CurvatureSignature sig;
    sig.t_value = t;
    sig.T_value = T;
    const Vec3 cpp = c.derivative(t, 2);
    const Vec3 ddd = d.derivative(T, 2);
    const double tol = 1e-9 * (1.0 + cpp.norm() + ddd.norm());

    const double sc = cpp.dot(normal);
    const double sd = ddd.dot(normal);
    sig.sign_c = std::abs(sc) <= tol ? 0 : (sc > 0 ? 1 : -1);
    sig.sign_d = std::abs(sd) <= tol ? 0 : (sd > 0 ? 1 : -1);
    sig.compatible = sig.sign_c != 0 && sig.sign_c == sig.sign_d;
    return sig;
}

std::optional<Vec3> ruling_normal_at(const NurbsCurve& c, const NurbsCurve& d, double t,
                                     double T) {
    const Vec3 cp = c.derivative(t, 1);
    const Vec3 ruling = d.evaluate(T) - c.evaluate(t);
    const double scale = cp.norm() * ruling.norm();
    if (scale == 0.0) return std::nullopt;
    const Vec3 n = cp.cross(ruling);
    if (n.norm() <= 1e-9 * scale) return std::nullopt;
    return Vec3(n / n.norm());
}

int degree_bound(const CurvePairClassification& classification) {
    const int n = std::max(classification.effective_degree, 1);
    if (classification.both_polynomial && classification.planar_parallel) return n - 1;
    return 2 * n - 2;
}

}  // namespace devpatch
