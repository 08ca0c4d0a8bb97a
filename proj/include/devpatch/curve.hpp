#pragma once
// Clamped NURBS / B-spline / Bezier curves with derivatives up to order 2,
// evaluated on the homogeneous form, plus structural queries on curve pairs.

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <vector>

namespace devpatch {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;

struct ControlPoint {
    Vec3 position = Vec3::Zero();
    double weight = 1.0;
};

class NurbsCurve {
public:
    // Validates the clamped-knot invariants: knot count = points + degree + 1,
    // non-decreasing knots, end multiplicities degree + 1, positive finite
    // weights. Throws std::invalid_argument on violation.
    NurbsCurve(int degree, std::vector<double> knots, std::vector<ControlPoint> points);

    // Bezier convenience constructors on [0,1].
    static NurbsCurve bezier(std::vector<Vec3> points);
    static NurbsCurve bezier(std::vector<Vec3> points, std::vector<double> weights);

    int degree() const { return degree_; }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<ControlPoint>& control_points() const { return points_; }
    double t_min() const { return knots_.front(); }
    double t_max() const { return knots_.back(); }
    bool single_span() const { return knots_.size() == 2 * size_t(degree_ + 1); }

    // Point on the curve. Out-of-domain parameters raise std::domain_error.
    Vec3 evaluate(double t) const;

    // Exact derivative of the rational parametrisation, order 1 or 2.
    Vec3 derivative(double t, int order) const;

    // Polynomial extension of the first/last span for parameters slightly
    // outside the domain; used by finite-difference probes at the boundary.
    Vec3 evaluate_extrapolated(double t) const;

    // Homogeneous curve A(t) = (w*x, w*y, w*z, w) and its first two
    // derivatives, without the domain check.
    std::array<Vec4, 3> homogeneous_derivatives(double t) const;

    // All weights equal within a relative tolerance.
    bool is_polynomial(double rel_tol = 1e-12) const;

    // Affine reparametrisation of the knot vector onto [a, b].
    NurbsCurve with_domain(double a, double b) const;

    // Axis-aligned bounding box of the control points (contains the curve).
    void bounding_box(Vec3& lo, Vec3& hi) const;

private:
    int find_span(double t) const;

    int degree_;
    std::vector<double> knots_;
    std::vector<ControlPoint> points_;
    std::vector<Vec4> hpoints_;  // cached homogeneous control points
};

struct CurvePairClassification {
    bool both_polynomial = false;
    bool planar_parallel = false;
    std::optional<Vec3> common_plane_normal;
    int effective_degree = 0;
};

// Planarity is detected from the singular values of the centered control
// points, with tol relative to the joint bounding-box diagonal.
CurvePairClassification classify_pair(const NurbsCurve& c, const NurbsCurve& d,
                                      double tol = 1e-9);

// Best-fit plane of a point set. Returns false when the points do not lie in
// a plane within tol_abs; the normal is sign-fixed on its largest component.
bool fit_plane(const std::vector<Vec3>& points, double tol_abs, Vec3& normal);

// Decomposition into Bezier segments by knot insertion to full multiplicity.
// Each returned curve is single-span and keeps its parent parameter interval,
// so concatenation reproduces the input curve.
std::vector<NurbsCurve> extract_bezier_spans(const NurbsCurve& curve);

// Single Boehm knot insertion.
NurbsCurve insert_knot(const NurbsCurve& curve, double u);

}  // namespace devpatch
