#pragma once
// The algebraic developability condition det(c'(t), dd/dT, d(T) - c(t)) = 0
// assembled as a univariate polynomial in T at fixed t, the derivative
// formula for the reparametrisation T'(t), and the normal-curvature sign
// test that characterises monotone solutions.

#include <optional>
#include <vector>

#include "devpatch/curve.hpp"
#include "devpatch/polynomial.hpp"

namespace devpatch {

// Power-basis condition polynomial at a fixed t. Coefficients are scaled so
// the largest magnitude is 1 (original magnitude kept in `scale`); they are
// expressed in the local span coordinate s in [0,1], which maps affinely to
// the global parameter of d via [span_start, span_end]. For a single-span d
// on [0,1], s and T coincide.
struct ConditionPolynomial {
    std::vector<double> coefficients;  // 2n-1 slots for a degree-n span, low power first
    double t_value = 0.0;
    double scale = 1.0;
    bool degenerate = false;  // identically zero within tolerance: every T solves
    double span_start = 0.0;
    double span_end = 1.0;

    double evaluate(double s) const;  // normalised coefficients
    double global_parameter(double s) const { return span_start + s * (span_end - span_start); }
    double local_parameter(double T) const {
        return (T - span_start) / (span_end - span_start);
    }
    // Highest power with |coefficient| > 1e-10 after normalisation, -1 if none.
    int observed_degree() const;
};

struct CurvatureSignature {
    double t_value = 0.0;
    double T_value = 0.0;
    int sign_c = 0;  // sign of c''(t) . normal
    int sign_d = 0;  // sign of d..(T) . normal
    bool compatible = false;  // both nonzero and equal
};

// Cached power-basis form of one Bezier span of d in homogeneous coordinates
// (local parameter s in [0,1]). F and E are the t-independent parts of the
// cleared condition polynomial,
//   P(s) = c'(t) . F(s) + c'(t) . (E(s) x c(t)),
// with F = D' x D and E = w'D - wD' for homogeneous D(s), w(s); the triple
// product equals P divided by the positive factor (u1-u0) w(s)^2. Both are
// assembled pairwise with integer factors (i-j), so every slot above 2n-2
// vanishes identically rather than by floating-point cancellation.
struct PowerSpan {
    Polynomial x, y, z, w;   // homogeneous components in s
    std::vector<Vec3> F, E;  // power coefficients, size max(2n-1, 0)
    double ref_f = 0.0;      // sum of |term| magnitudes before cancellation
    double ref_e = 0.0;
    double u0 = 0.0, u1 = 1.0;  // global parameter interval of the span

    static PowerSpan from_bezier(const NurbsCurve& span);
    Vec3 point(double s) const;
};

// det with columns (c'(t), dd/dT, d(T) - c(t)).
double triple_product(const NurbsCurve& c, const NurbsCurve& d, double t, double T);

// Condition polynomial for a single-span (Bezier) d; c may be piecewise.
ConditionPolynomial condition_polynomial(const NurbsCurve& c, const NurbsCurve& d, double t);

// Assembly core against a cached span of d.
ConditionPolynomial assemble_condition(const Vec3& c_point, const Vec3& c_vel,
                                       const PowerSpan& dspan, double t);

// T'(t) = det(c''(t), dd, d - c) / det(d.., c'(t), d - c) on a solution
// branch. Returns nullopt when the denominator vanishes (straight pieces of
// d, or branch points); callers fall back to secant continuation.
std::optional<double> reparam_derivative(const NurbsCurve& c, const NurbsCurve& d, double t,
                                         double T);

// Sign test: T(t) is locally monotone exactly when the normal curvature
// signs of both boundary curves agree and are nonzero along the ruling.
CurvatureSignature curvature_signature(const NurbsCurve& c, const NurbsCurve& d, double t,
                                       double T, const Vec3& normal);

// Unit surface normal along the ruling at (t, T), computed at v=0:
// unit(c'(t) x (d(T) - c(t))). Returns nullopt for degenerate rulings.
std::optional<Vec3> ruling_normal_at(const NurbsCurve& c, const NurbsCurve& d, double t,
                                     double T);

// Degree bound for the condition polynomial: n-1 when both curves are
// polynomial and lie on parallel planes, otherwise 2n-2 (n the larger of the
// two curve degrees, at least 1).
int degree_bound(const CurvePairClassification& classification);

}  // namespace devpatch
