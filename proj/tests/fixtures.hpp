#pragma once
// Shared curve constructions for tests: canonical developable pairs
// (translated copies, scaled cone-type copies), counterexamples (mirrors,
// twisted lines), and seeded random generators.

#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "devpatch/curve.hpp"

namespace fixtures {

using devpatch::ControlPoint;
using devpatch::NurbsCurve;
using devpatch::Vec3;

// Cubic arc in the z=0 plane, bending downwards in y after the crest.
inline NurbsCurve standard_arc() {
    return NurbsCurve::bezier(
        {Vec3(0, 0, 0), Vec3(1, 2, 0), Vec3(2, 2, 0), Vec3(3, 0, 0)});
}

inline NurbsCurve translated(const NurbsCurve& curve, const Vec3& offset) {
    std::vector<ControlPoint> pts = curve.control_points();
    for (ControlPoint& p : pts) p.position += offset;
    return NurbsCurve(curve.degree(), curve.knots(), std::move(pts));
}

// Uniform in-plane scaling about the origin, lifted to height z; with the
// matching curve at z=0 this builds a generalized cone (apex on the z axis).
inline NurbsCurve scaled_xy(const NurbsCurve& curve, double factor, double z) {
    std::vector<ControlPoint> pts = curve.control_points();
    for (ControlPoint& p : pts) {
        p.position = Vec3(factor * p.position.x(), factor * p.position.y(), z);
    }
    return NurbsCurve(curve.degree(), curve.knots(), std::move(pts));
}

// Mirror y -> -y, lifted to height z: flips the normal-curvature sign.
inline NurbsCurve mirrored_y(const NurbsCurve& curve, double z) {
    std::vector<ControlPoint> pts = curve.control_points();
    for (ControlPoint& p : pts) p.position = Vec3(p.position.x(), -p.position.y(), z);
    return NurbsCurve(curve.degree(), curve.knots(), std::move(pts));
}

// In-plane rotation about the origin, lifted to height z.
inline NurbsCurve rotated_xy(const NurbsCurve& curve, double angle, double z) {
    const double ca = std::cos(angle), sa = std::sin(angle);
    std::vector<ControlPoint> pts = curve.control_points();
    for (ControlPoint& p : pts) {
        p.position = Vec3(ca * p.position.x() - sa * p.position.y(),
                          sa * p.position.x() + ca * p.position.y(), z);
    }
    return NurbsCurve(curve.degree(), curve.knots(), std::move(pts));
}

// Exact quarter unit circle: rational quadratic with middle weight sqrt(2)/2.
inline NurbsCurve quarter_circle() {
    return NurbsCurve::bezier({Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)},
                              {1.0, std::sqrt(2.0) / 2.0, 1.0});
}

// Twisted line pair: the triple product is identically -1, so no ruling
// assignment makes the surface developable.
inline NurbsCurve line_c() {
    return NurbsCurve::bezier({Vec3(0, 0, 0), Vec3(1, 0, 0)});
}
inline NurbsCurve line_d_twisted() {
    return NurbsCurve::bezier({Vec3(0, 1, 0), Vec3(1, 1, 1)});
}

// Symmetric convex arc in z=0 with shape parameters: control polygon
// (0,0), (u,h), (w-u,h), (w,0). Symmetric so the y-mirrored copy still
// admits the T = 1-t tangent-parallel branch.
inline NurbsCurve symmetric_arc(double u, double h, double w) {
    return NurbsCurve::bezier(
        {Vec3(0, 0, 0), Vec3(u, h, 0), Vec3(w - u, h, 0), Vec3(w, 0, 0)});
}

// C2 planar clamped cubic B-spline (one interior knot), convex with a
// monotone tangent direction; used for the cross-join smoothness check.
inline NurbsCurve spline_arc() {
    std::vector<ControlPoint> pts;
    for (const Vec3& p : {Vec3(0, 0, 0), Vec3(1, 1.2, 0), Vec3(2.2, 1.8, 0),
                          Vec3(3.4, 1.0, 0), Vec3(4, 0, 0)}) {
        pts.push_back(ControlPoint{p, 1.0});
    }
    return NurbsCurve(3, {0, 0, 0, 0, 0.5, 1, 1, 1, 1}, std::move(pts));
}

inline NurbsCurve random_cubic(std::mt19937& rng, double box = 3.0) {
    std::uniform_real_distribution<double> coord(-box, box);
    std::vector<Vec3> pts;
    for (int i = 0; i < 4; ++i) pts.emplace_back(coord(rng), coord(rng), coord(rng));
    return NurbsCurve::bezier(std::move(pts));
}

inline NurbsCurve random_rational_cubic(std::mt19937& rng, double box = 3.0) {
    std::uniform_real_distribution<double> coord(-box, box);
    std::uniform_real_distribution<double> weight(0.5, 2.0);
    std::vector<Vec3> pts;
    std::vector<double> ws;
    for (int i = 0; i < 4; ++i) {
        pts.emplace_back(coord(rng), coord(rng), coord(rng));
        ws.push_back(weight(rng));
    }
    return NurbsCurve::bezier(std::move(pts), std::move(ws));
}

// Random planar cubic at height z (control points in the z=const plane).
inline NurbsCurve random_planar_cubic(std::mt19937& rng, double z, double box = 3.0) {
    std::uniform_real_distribution<double> coord(-box, box);
    std::vector<Vec3> pts;
    for (int i = 0; i < 4; ++i) pts.emplace_back(coord(rng), coord(rng), z);
    return NurbsCurve::bezier(std::move(pts));
}

inline nlohmann::json curve_to_json(const NurbsCurve& curve) {
    nlohmann::json j;
    j["degree"] = curve.degree();
    j["knots"] = curve.knots();
    auto points = nlohmann::json::array();
    auto weights = nlohmann::json::array();
    bool rational = false;
    for (const ControlPoint& p : curve.control_points()) {
        points.push_back({p.position.x(), p.position.y(), p.position.z()});
        weights.push_back(p.weight);
        if (p.weight != 1.0) rational = true;
    }
    j["points"] = points;
    if (rational) j["weights"] = weights;
    return j;
}

inline void write_curve_json(const std::string& path, const NurbsCurve& curve) {
    std::ofstream out(path, std::ios::binary);
    out << curve_to_json(curve).dump(2) << "\n";
}

}  // namespace fixtures
