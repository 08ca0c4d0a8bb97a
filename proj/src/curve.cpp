#include "devpatch/curve.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace devpatch {

namespace {

constexpr double kKnotEqualTol = 1e-12;

// Basis functions and derivatives on one span (Piegl & Tiller A2.3 / A2.7).
// Valid as the polynomial extension when u lies outside the span.
void basis_derivatives(int span, double u, int degree, const std::vector<double>& knots,
                       int nders, double ders[3][16]) {
    double ndu[16][16];
    double left[16];
    double right[16];
    ndu[0][0] = 1.0;
    for (int j = 1; j <= degree; ++j) {
        left[j] = u - knots[span + 1 - j];
        right[j] = knots[span + j] - u;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            const double temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }
    for (int j = 0; j <= degree; ++j) ders[0][j] = ndu[j][degree];

    double a[2][16];
    for (int r = 0; r <= degree; ++r) {
        int s1 = 0, s2 = 1;
        a[0][0] = 1.0;
        for (int k = 1; k <= nders; ++k) {
            double dsum = 0.0;
            const int rk = r - k;
            const int pk = degree - k;
            if (r >= k) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                dsum = a[s2][0] * ndu[rk][pk];
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : degree - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                dsum += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                dsum += a[s2][k] * ndu[r][pk];
            }
            ders[k][r] = dsum;
            std::swap(s1, s2);
        }
    }
    // multiply through by the degree factors
    double factor = degree;
    for (int k = 1; k <= nders; ++k) {
        for (int j = 0; j <= degree; ++j) ders[k][j] *= factor;
        factor *= (degree - k);
    }
}

}  // namespace

NurbsCurve::NurbsCurve(int degree, std::vector<double> knots, std::vector<ControlPoint> points)
    : degree_(degree), knots_(std::move(knots)), points_(std::move(points)) {
    if (degree_ < 0) throw std::invalid_argument("curve degree must be non-negative");
    if (degree_ > 15) throw std::invalid_argument("curve degree above 15 is not supported");
    if (points_.size() < size_t(degree_ + 1))
        throw std::invalid_argument("curve needs at least degree+1 control points");
    if (knots_.size() != points_.size() + degree_ + 1)
        throw std::invalid_argument("knot count must equal control-point count + degree + 1");
    for (size_t i = 1; i < knots_.size(); ++i)
        if (knots_[i] < knots_[i - 1]) throw std::invalid_argument("knots must be non-decreasing");
    const double span = knots_.back() - knots_.front();
    if (!(span > 0)) throw std::invalid_argument("curve domain is empty");
    for (int i = 0; i <= degree_; ++i) {
        if (std::abs(knots_[i] - knots_.front()) > kKnotEqualTol * (1 + std::abs(span)) ||
            std::abs(knots_[knots_.size() - 1 - i] - knots_.back()) >
                kKnotEqualTol * (1 + std::abs(span)))
            throw std::invalid_argument("knot vector must be clamped (end multiplicity degree+1)");
    }
    hpoints_.reserve(points_.size());
    for (const ControlPoint& p : points_) {
        if (!(p.weight > 0)) throw std::invalid_argument("control-point weights must be positive");
        if (!p.position.allFinite() || !std::isfinite(p.weight))
            throw std::invalid_argument("control-point coordinates must be finite");
        hpoints_.emplace_back(p.weight * p.position.x(), p.weight * p.position.y(),
                              p.weight * p.position.z(), p.weight);
    }
}

NurbsCurve NurbsCurve::bezier(std::vector<Vec3> points) {
    return bezier(std::move(points), std::vector<double>(0));
}

NurbsCurve NurbsCurve::bezier(std::vector<Vec3> points, std::vector<double> weights) {
    const int n = static_cast<int>(points.size()) - 1;
    if (n < 0) throw std::invalid_argument("bezier needs control points");
    std::vector<ControlPoint> cps(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        cps[i].position = points[i];
        cps[i].weight = weights.empty() ? 1.0 : weights.at(i);
    }
    std::vector<double> knots(2 * (n + 1), 0.0);
    std::fill(knots.begin() + (n + 1), knots.end(), 1.0);
    return NurbsCurve(n, std::move(knots), std::move(cps));
}

int NurbsCurve::find_span(double t) const {
    const int n = static_cast<int>(points_.size()) - 1;
    if (t >= knots_[n + 1]) return n;  // clamp to the last non-empty span
    if (t <= knots_[degree_]) return degree_;
    auto it = std::upper_bound(knots_.begin() + degree_, knots_.begin() + n + 1, t);
    return static_cast<int>(it - knots_.begin()) - 1;
}

std::array<Vec4, 3> NurbsCurve::homogeneous_derivatives(double t) const {
    const int span = find_span(t);
    double ders[3][16];
    basis_derivatives(span, t, degree_, knots_, 2, ders);
    std::array<Vec4, 3> out{Vec4::Zero(), Vec4::Zero(), Vec4::Zero()};
    for (int k = 0; k <= 2; ++k) {
        if (k > degree_) break;
        for (int j = 0; j <= degree_; ++j) out[k] += ders[k][j] * hpoints_[span - degree_ + j];
    }
    return out;
}

Vec3 NurbsCurve::evaluate(double t) const {
    const double slack = 1e-9 * (t_max() - t_min());
    if (t < t_min() - slack || t > t_max() + slack)
        throw std::domain_error("curve parameter outside domain");
    return evaluate_extrapolated(std::clamp(t, t_min(), t_max()));
}

Vec3 NurbsCurve::evaluate_extrapolated(double t) const {
    const auto A = homogeneous_derivatives(t);
    return A[0].head<3>() / A[0].w();
}

Vec3 NurbsCurve::derivative(double t, int order) const {
    if (order < 1 || order > 2) throw std::invalid_argument("derivative order must be 1 or 2");
    const double slack = 1e-9 * (t_max() - t_min());
    if (t < t_min() - slack || t > t_max() + slack)
        throw std::domain_error("curve parameter outside domain");
    t = std::clamp(t, t_min(), t_max());
    const auto A = homogeneous_derivatives(t);
    const double w = A[0].w();
    const Vec3 pos = A[0].head<3>() / w;
    const Vec3 vel = (A[1].head<3>() - A[1].w() * pos) / w;
    if (order == 1) return vel;
    return (A[2].head<3>() - 2.0 * A[1].w() * vel - A[2].w() * pos) / w;
}

bool NurbsCurve::is_polynomial(double rel_tol) const {
    double wmin = points_.front().weight, wmax = wmin;
    for (const ControlPoint& p : points_) {
        wmin = std::min(wmin, p.weight);
        wmax = std::max(wmax, p.weight);
    }
    return wmax - wmin <= rel_tol * wmax;
}

NurbsCurve NurbsCurve::with_domain(double a, double b) const {
    if (!(b > a)) throw std::invalid_argument("empty target domain");
    const double u0 = t_min(), u1 = t_max();
    std::vector<double> k(knots_.size());
    for (size_t i = 0; i < knots_.size(); ++i)
        k[i] = a + (b - a) * ((knots_[i] - u0) / (u1 - u0));
    // pin the clamped ends exactly
    for (int i = 0; i <= degree_; ++i) {
        k[i] = a;
        k[k.size() - 1 - i] = b;
    }
    return NurbsCurve(degree_, std::move(k), points_);
}

void NurbsCurve::bounding_box(Vec3& lo, Vec3& hi) const {
    lo = points_.front().position;
    hi = lo;
    for (const ControlPoint& p : points_) {
        lo = lo.cwiseMin(p.position);
        hi = hi.cwiseMax(p.position);
    }
}

bool fit_plane(const std::vector<Vec3>& points, double tol_abs, Vec3& normal) {
    Eigen::MatrixXd m(points.size(), 3);
    Vec3 mean = Vec3::Zero();
    for (const Vec3& p : points) mean += p;
    mean /= double(points.size());
    for (size_t i = 0; i < points.size(); ++i) m.row(i) = (points[i] - mean).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smallest = (points.size() >= 3) ? sv(2) : 0.0;
    if (smallest > tol_abs) return false;
    normal = svd.matrixV().col(2);
    int major = 0;
    normal.cwiseAbs().maxCoeff(&major);
    if (normal[major] < 0) normal = -normal;
    return true;
}

CurvePairClassification classify_pair(const NurbsCurve& c, const NurbsCurve& d, double tol) {
    CurvePairClassification out;
    out.both_polynomial = c.is_polynomial() && d.is_polynomial();
    out.effective_degree = std::max(c.degree(), d.degree());

    Vec3 lo_c, hi_c, lo_d, hi_d;
    c.bounding_box(lo_c, hi_c);
    d.bounding_box(lo_d, hi_d);
    const Vec3 lo = lo_c.cwiseMin(lo_d), hi = hi_c.cwiseMax(hi_d);
    const double diag = (hi - lo).norm();
    const double tol_abs = tol * (diag > 0 ? diag : 1.0);

    auto positions = [](const NurbsCurve& curve) {
        std::vector<Vec3> pts;
        pts.reserve(curve.control_points().size());
        for (const ControlPoint& p : curve.control_points()) pts.push_back(p.position);
        return pts;
    };
    Vec3 nc, nd;
    const bool pc = fit_plane(positions(c), tol_abs, nc);
    const bool pd = fit_plane(positions(d), tol_abs, nd);
    if (pc && pd && nc.cross(nd).norm() <= std::max(tol, 1e-12)) {
        out.planar_parallel = true;
        out.common_plane_normal = (nc + nd).normalized();
    }
    return out;
}

NurbsCurve insert_knot(const NurbsCurve& curve, double u) {
    const int p = curve.degree();
    const auto& knots = curve.knots();
    const auto& cps = curve.control_points();
    if (u <= curve.t_min() || u >= curve.t_max())
        throw std::invalid_argument("knot to insert must be interior");

    // span index k with knots[k] <= u < knots[k+1]
    int k = p;
    while (k + 1 < static_cast<int>(knots.size()) && knots[k + 1] <= u) ++k;

    std::vector<Vec4> hp;
    hp.reserve(cps.size());
    for (const ControlPoint& q : cps)
        hp.emplace_back(q.weight * q.position.x(), q.weight * q.position.y(),
                        q.weight * q.position.z(), q.weight);

    std::vector<Vec4> out(cps.size() + 1);
    for (int i = 0; i <= k - p; ++i) out[i] = hp[i];
    for (int i = k - p + 1; i <= k; ++i) {
        const double denom = knots[i + p] - knots[i];
        const double alpha = (denom > 0) ? (u - knots[i]) / denom : 0.0;
        out[i] = (1.0 - alpha) * hp[i - 1] + alpha * hp[i];
    }
    for (size_t i = k + 1; i < out.size(); ++i) out[i] = hp[i - 1];

    std::vector<double> new_knots(knots);
    new_knots.insert(new_knots.begin() + (k + 1), u);

    std::vector<ControlPoint> new_cps(out.size());
    for (size_t i = 0; i < out.size(); ++i) {
        new_cps[i].weight = out[i].w();
        new_cps[i].position = out[i].head<3>() / out[i].w();
    }
    return NurbsCurve(p, std::move(new_knots), std::move(new_cps));
}

std::vector<NurbsCurve> extract_bezier_spans(const NurbsCurve& curve) {
    const int p = curve.degree();
    NurbsCurve work = curve;

    // distinct interior knots with multiplicities
    auto interior = [&]() {
        std::vector<std::pair<double, int>> uniq;
        const auto& k = work.knots();
        for (size_t i = p + 1; i + p + 1 < k.size(); ++i) {
            if (!uniq.empty() && std::abs(k[i] - uniq.back().first) <=
                                     kKnotEqualTol * (1 + std::abs(k[i])))
                uniq.back().second++;
            else
                uniq.emplace_back(k[i], 1);
        }
        return uniq;
    };

    for (const auto& [u, mult] : interior())
        for (int j = mult; j < p; ++j) work = insert_knot(work, u);

    // with all interior knots at multiplicity p, span s owns control points
    // [s*p, s*p + p]
    std::vector<NurbsCurve> spans;
    std::vector<std::pair<double, int>> uniq = interior();
    std::vector<double> breaks{work.t_min()};
    for (const auto& [u, mult] : uniq) breaks.push_back(u);
    breaks.push_back(work.t_max());

    const auto& cps = work.control_points();
    for (size_t s = 0; s + 1 < breaks.size(); ++s) {
        std::vector<ControlPoint> seg(cps.begin() + s * p, cps.begin() + s * p + p + 1);
        std::vector<double> k(2 * (p + 1));
        std::fill(k.begin(), k.begin() + p + 1, breaks[s]);
        std::fill(k.begin() + p + 1, k.end(), breaks[s + 1]);
        spans.emplace_back(p, std::move(k), std::move(seg));
    }
    return spans;
}

}  // namespace devpatch
