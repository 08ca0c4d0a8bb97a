#include <doctest.h>

#include <cmath>
#include <random>

#include "devpatch/curve.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using devpatch::classify_pair;
using devpatch::ControlPoint;
using devpatch::extract_bezier_spans;
using devpatch::insert_knot;
using devpatch::NurbsCurve;
using devpatch::Vec3;

TEST_CASE("evaluate: line midpoint and clamped endpoints") {
    const NurbsCurve line = NurbsCurve::bezier({Vec3(0, 0, 0), Vec3(3, 0, 0)});
    CHECK((line.evaluate(0.5) - Vec3(1.5, 0, 0)).norm() == doctest::Approx(0.0));

    const NurbsCurve arc = fixtures::standard_arc();
    CHECK((arc.evaluate(0.0) - Vec3(0, 0, 0)).norm() == doctest::Approx(0.0));
    CHECK((arc.evaluate(1.0) - Vec3(3, 0, 0)).norm() == doctest::Approx(0.0));
    // de Casteljau midpoint of the standard arc.
    CHECK((arc.evaluate(0.5) - Vec3(1.5, 1.5, 0)).norm() < 1e-14);
}

TEST_CASE("evaluate matches the recursive basis oracle") {
    std::mt19937 rng(21);
    const NurbsCurve curves[] = {fixtures::standard_arc(), fixtures::spline_arc(),
                                 fixtures::random_rational_cubic(rng),
                                 fixtures::quarter_circle()};
    for (const NurbsCurve& curve : curves) {
        for (int i = 0; i <= 20; ++i) {
            const double t = i / 20.0;
            CHECK((curve.evaluate(t) - oracle::rational_point(curve, t)).norm() < 1e-12);
        }
    }
}

TEST_CASE("evaluate: out-of-domain parameter is a domain error") {
    const NurbsCurve arc = fixtures::standard_arc();
    CHECK_THROWS_AS(arc.evaluate(-0.01), std::domain_error);
    CHECK_THROWS_AS(arc.evaluate(1.01), std::domain_error);
    CHECK_NOTHROW(arc.evaluate(1.0));
}

TEST_CASE("derivative: constant, endpoint, and second-derivative values") {
    const NurbsCurve line = NurbsCurve::bezier({Vec3(0, 0, 0), Vec3(3, 0, 0)});
    for (double t : {0.0, 0.3, 1.0}) {
        CHECK((line.derivative(t, 1) - Vec3(3, 0, 0)).norm() < 1e-14);
    }

    const NurbsCurve arc = fixtures::standard_arc();
    CHECK((arc.derivative(0.0, 1) - Vec3(3, 6, 0)).norm() < 1e-13);
    CHECK((arc.derivative(0.5, 2) - Vec3(0, -12, 0)).norm() < 1e-12);
}

TEST_CASE("derivatives match central finite differences") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const NurbsCurve curve = trial % 2 == 0 ? fixtures::random_cubic(rng, 10.0)
                                                : fixtures::random_rational_cubic(rng, 10.0);
        const auto f = [&](double t) { return curve.evaluate(t); };
        for (double t : {0.2, 0.5, 0.8}) {
            const Vec3 d1 = curve.derivative(t, 1);
            const Vec3 fd1 = oracle::central_difference(f, t, 1e-6, 1);
            CHECK((d1 - fd1).norm() < 1e-6 * (1.0 + d1.norm()));
            const Vec3 d2 = curve.derivative(t, 2);
            const Vec3 fd2 = oracle::central_difference(f, t, 1e-5, 2);
            CHECK((d2 - fd2).norm() < 1e-4 * (1.0 + d2.norm()));
        }
    }
}

TEST_CASE("equal weights behave like the polynomial curve") {
    const NurbsCurve poly = fixtures::standard_arc();
    std::vector<Vec3> pts;
    for (const ControlPoint& p : poly.control_points()) pts.push_back(p.position);
    const NurbsCurve weighted = NurbsCurve::bezier(pts, {2.5, 2.5, 2.5, 2.5});
    for (int i = 0; i <= 50; ++i) {
        const double t = i / 50.0;
        CHECK((poly.evaluate(t) - weighted.evaluate(t)).norm() < 1e-13);
    }
    CHECK(weighted.is_polynomial());
}

TEST_CASE("rational quarter circle lies on the unit circle") {
    const NurbsCurve qc = fixtures::quarter_circle();
    for (int i = 0; i <= 40; ++i) {
        const double t = i / 40.0;
        CHECK(qc.evaluate(t).head<2>().norm() == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK_FALSE(qc.is_polynomial());
}

TEST_CASE("constructor validates the clamped-knot invariants") {
    std::vector<ControlPoint> two = {ControlPoint{Vec3(0, 0, 0), 1.0},
                                     ControlPoint{Vec3(1, 0, 0), 1.0}};
    CHECK_THROWS_AS(NurbsCurve(1, {0, 0, 1}, two), std::invalid_argument);        // count
    CHECK_THROWS_AS(NurbsCurve(1, {0, 1, 0, 1}, two), std::invalid_argument);     // order
    CHECK_THROWS_AS(NurbsCurve(1, {0, 0.5, 1, 1}, two), std::invalid_argument);   // clamping
    std::vector<ControlPoint> bad_weight = two;
    bad_weight[0].weight = -1.0;
    CHECK_THROWS_AS(NurbsCurve(1, {0, 0, 1, 1}, bad_weight), std::invalid_argument);
}

TEST_CASE("classify_pair: translated copy on parallel planes") {
    const NurbsCurve c = fixtures::standard_arc();
    const NurbsCurve d = fixtures::translated(c, Vec3(0, 0, 1));
    const auto cls = classify_pair(c, d);
    CHECK(cls.both_polynomial);
    CHECK(cls.planar_parallel);
    REQUIRE(cls.common_plane_normal.has_value());
    CHECK(std::abs(std::abs(cls.common_plane_normal->z()) - 1.0) < 1e-12);
    CHECK(cls.effective_degree == 3);
}

TEST_CASE("classify_pair: twisted and rational pairs") {
    const NurbsCurve c = fixtures::standard_arc();
    const NurbsCurve twisted = NurbsCurve::bezier(
        {Vec3(0, 0, 0), Vec3(1, 2, 1), Vec3(2, 2, 0), Vec3(3, 0, 1)});
    CHECK_FALSE(classify_pair(c, twisted).planar_parallel);

    const NurbsCurve rational = fixtures::quarter_circle();
    CHECK_FALSE(classify_pair(c, rational).both_polynomial);
}

TEST_CASE("classify_pair: non-parallel planes") {
    const NurbsCurve c = fixtures::standard_arc();  // z = 0 plane
    // Planar curve in the x=0 plane.
    const NurbsCurve upright = NurbsCurve::bezier(
        {Vec3(0, 0, 1), Vec3(0, 2, 2), Vec3(0, 2, 3), Vec3(0, 0, 4)});
    const auto cls = classify_pair(c, upright);
    CHECK_FALSE(cls.planar_parallel);
}

TEST_CASE("extract_bezier_spans: identity on a single span") {
    const NurbsCurve arc = fixtures::standard_arc();
    const auto spans = extract_bezier_spans(arc);
    REQUIRE(spans.size() == 1);
    for (int i = 0; i <= 10; ++i) {
        const double t = i / 10.0;
        CHECK((spans[0].evaluate(t) - arc.evaluate(t)).norm() < 1e-14);
    }
}

TEST_CASE("extract_bezier_spans: interior knot splits into two segments") {
    const NurbsCurve spline = fixtures::spline_arc();
    const auto spans = extract_bezier_spans(spline);
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].t_min() == 0.0);
    CHECK(spans[0].t_max() == 0.5);
    CHECK(spans[1].t_min() == 0.5);
    CHECK(spans[1].t_max() == 1.0);
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const NurbsCurve& piece = t <= 0.5 ? spans[0] : spans[1];
        CHECK((piece.evaluate(t) - spline.evaluate(t)).norm() < 1e-13);
    }
}

TEST_CASE("extract_bezier_spans preserves values and derivatives everywhere") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    std::vector<ControlPoint> pts;
    std::vector<double> ws = {1.0, 0.7, 1.4, 1.0, 0.9, 1.2};
    for (int i = 0; i < 6; ++i) {
        pts.push_back(ControlPoint{Vec3(coord(rng), coord(rng), coord(rng)), ws[i]});
    }
    const NurbsCurve curve(3, {0, 0, 0, 0, 0.3, 0.7, 1, 1, 1, 1}, pts);
    const auto spans = extract_bezier_spans(curve);
    REQUIRE(spans.size() == 3);
    for (int i = 0; i <= 100; ++i) {
        const double t = i / 100.0;
        const NurbsCurve* piece = &spans.back();
        for (const NurbsCurve& s : spans) {
            if (t <= s.t_max()) {
                piece = &s;
                break;
            }
        }
        CHECK((piece->evaluate(t) - curve.evaluate(t)).norm() < 1e-12);
        CHECK((piece->derivative(t, 1) - curve.derivative(t, 1)).norm() <
              1e-10 * (1.0 + curve.derivative(t, 1).norm()));
    }
}

TEST_CASE("extract_bezier_spans: polyline splits into linear segments") {
    std::vector<ControlPoint> pts = {ControlPoint{Vec3(0, 0, 0), 1.0},
                                     ControlPoint{Vec3(1, 1, 0), 1.0},
                                     ControlPoint{Vec3(2, 0, 0), 1.0}};
    const NurbsCurve polyline(1, {0, 0, 0.5, 1, 1}, pts);
    const auto spans = extract_bezier_spans(polyline);
    REQUIRE(spans.size() == 2);
    CHECK((spans[0].evaluate(0.25) - Vec3(0.5, 0.5, 0)).norm() < 1e-14);
    CHECK((spans[1].evaluate(0.75) - Vec3(1.5, 0.5, 0)).norm() < 1e-14);
}

TEST_CASE("insert_knot preserves the curve") {
    const NurbsCurve arc = fixtures::standard_arc();
    const NurbsCurve refined = insert_knot(arc, 0.4);
    CHECK(refined.control_points().size() == arc.control_points().size() + 1);
    for (int i = 0; i <= 50; ++i) {
        const double t = i / 50.0;
        CHECK((refined.evaluate(t) - arc.evaluate(t)).norm() < 1e-13);
    }
}

TEST_CASE("with_domain remaps parameters affinely") {
    const NurbsCurve arc = fixtures::standard_arc();
    const NurbsCurve wide = arc.with_domain(2.0, 6.0);
    CHECK(wide.t_min() == 2.0);
    CHECK(wide.t_max() == 6.0);
    CHECK((wide.evaluate(4.0) - arc.evaluate(0.5)).norm() < 1e-14);
    // Derivatives pick up the chain-rule factor.
    CHECK((wide.derivative(4.0, 1) * 4.0 - arc.derivative(0.5, 1)).norm() < 1e-12);
}

TEST_CASE("evaluate_extrapolated extends the end spans polynomially") {
    const NurbsCurve arc = fixtures::standard_arc();
    for (int i = 0; i <= 10; ++i) {
        const double t = i / 10.0;
        CHECK((arc.evaluate_extrapolated(t) - arc.evaluate(t)).norm() < 1e-14);
    }
    // Outside the domain: smooth continuation, consistent with derivatives.
    const double h = 1e-4;
    const Vec3 beyond = arc.evaluate_extrapolated(1.0 + h);
    const Vec3 taylor = arc.evaluate(1.0) + h * arc.derivative(1.0, 1) +
                        0.5 * h * h * arc.derivative(1.0, 2);
    CHECK((beyond - taylor).norm() < 1e-9);
}

TEST_CASE("bounding box contains sampled curve points") {
    std::mt19937 rng(55);
    const NurbsCurve curve = fixtures::random_rational_cubic(rng);
    Vec3 lo, hi;
    curve.bounding_box(lo, hi);
    for (int i = 0; i <= 20; ++i) {
        const Vec3 p = curve.evaluate(i / 20.0);
        for (int k = 0; k < 3; ++k) {
            CHECK(p[k] >= lo[k] - 1e-12);
            CHECK(p[k] <= hi[k] + 1e-12);
        }
    }
}
