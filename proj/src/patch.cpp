#include "devpatch/patch.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>

#include "devpatch/parallel.hpp"

namespace devpatch {

namespace {

constexpr double kFdStep = 1e-5;       // central-difference step
constexpr double kSingularSin = 1e-9;  // |bt x bv| / (|bt||bv|) below => singular

std::string format_max_k(double max_k) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "patch is not developable: max normalised |K| = %.3e",
                  max_k);
    return buf;
}

}  // namespace

NotDevelopableError::NotDevelopableError(double max_k_normalised)
    : std::runtime_error(format_max_k(max_k_normalised)), max_k_(max_k_normalised) {}

RuledSurface RuledSurface::with_identity(NurbsCurve c, NurbsCurve d) {
    const double xs[2] = {c.t_min(), c.t_max()};
    const double ys[2] = {d.t_min(), d.t_max()};
    MonotoneCubic affine = MonotoneCubic::fit(xs, ys);
    return RuledSurface{std::move(c), std::move(d), std::move(affine)};
}

Vec3 RuledSurface::point(double t, double v) const {
    const double T = reparam.value(t);
    return (1.0 - v) * c.evaluate(t) + v * d.evaluate_extrapolated(T);
}

Vec3 RuledSurface::point_extended(double t, double v) const {
    const double T = reparam.value(t);
    return (1.0 - v) * c.evaluate_extrapolated(t) + v * d.evaluate_extrapolated(T);
}

RuledSurface::Partials RuledSurface::partials(double t, double v) const {
    const double T = reparam.value(t);
    const double Tp = reparam.deriv(t);
    const double Tpp = reparam.deriv2(t);

    const Vec3 cpt = c.evaluate(t);
    const Vec3 cp = c.derivative(t, 1);
    const Vec3 cpp = c.derivative(t, 2);
    const Vec3 dpt = d.evaluate(T);
    const Vec3 dd = d.derivative(T, 1);
    const Vec3 ddd = d.derivative(T, 2);

    Partials out;
    out.bt = (1.0 - v) * cp + v * Tp * dd;
    out.bv = dpt - cpt;
    out.btt = (1.0 - v) * cpp + v * (Tp * Tp * ddd + Tpp * dd);
    out.btv = Tp * dd - cp;
    return out;
}

double RuledSurface::bbox_diag() const {
    Vec3 lo_c, hi_c, lo_d, hi_d;
    c.bounding_box(lo_c, hi_c);
    d.bounding_box(lo_d, hi_d);
    const Vec3 lo = lo_c.cwiseMin(lo_d);
    const Vec3 hi = hi_c.cwiseMax(hi_d);
    return (hi - lo).norm();
}

DevelopablePatch DevelopablePatch::from_branch(NurbsCurve c, NurbsCurve d,
                                               ReparamBranch branch) {
    if (branch.samples.size() < 2) {
        throw std::invalid_argument("a patch needs a branch with at least two samples");
    }
    std::vector<double> xs, ys;
    xs.reserve(branch.samples.size());
    ys.reserve(branch.samples.size());
    for (const BranchSample& s : branch.samples) {
        xs.push_back(s.t);
        ys.push_back(s.T);
    }
    MonotoneCubic interp = MonotoneCubic::fit(xs, ys);
    return DevelopablePatch{RuledSurface{std::move(c), std::move(d), std::move(interp)},
                            std::move(branch)};
}

Vec3 surface_point(const DevelopablePatch& patch, double t, double v) {
    const double slack_t = 1e-9 * (patch.t_max() - patch.t_min());
    if (t < patch.t_min() - slack_t || t > patch.t_max() + slack_t) {
        throw std::domain_error("surface parameter t outside the branch range");
    }
    if (v < -1e-9 || v > 1.0 + 1e-9) {
        throw std::domain_error("surface parameter v outside [0, 1]");
    }
    return patch.surface.point(t, v);
}

Vec3 ruling_normal(const RuledSurface& surface, double t) {
    const RuledSurface::Partials p = surface.partials(t, 0.0);
    const double scale = p.bt.norm() * p.bv.norm();
    const Vec3 n = p.bt.cross(p.bv);
    if (scale == 0.0 || n.norm() <= kSingularSin * scale) {
        throw SingularRulingError("ruling is parallel to the tangent direction");
    }
    return n / n.norm();
}

Vec3 ruling_normal(const DevelopablePatch& patch, double t) {
    return ruling_normal(patch.surface, t);
}

namespace {

RuledSurface::Partials finite_difference_partials(const RuledSurface& s, double t, double v) {
    const auto f = [&](double tt, double vv) { return s.point_extended(tt, vv); };
    const auto richardson = [](const Vec3& fine, const Vec3& coarse) {
        return (4.0 * fine - coarse) / 3.0;
    };

    const Vec3 f0 = f(t, v);
    RuledSurface::Partials out;
    const auto first_t = [&](double h) { return (f(t + h, v) - f(t - h, v)) / (2.0 * h); };
    const auto first_v = [&](double h) { return (f(t, v + h) - f(t, v - h)) / (2.0 * h); };
    const auto second_t = [&](double h) {
        return (f(t + h, v) - 2.0 * f0 + f(t - h, v)) / (h * h);
    };
    const auto mixed = [&](double h) {
        return (f(t + h, v + h) - f(t + h, v - h) - f(t - h, v + h) + f(t - h, v - h)) /
               (4.0 * h * h);
    };

    const double h = kFdStep;
    out.bt = richardson(first_t(h), first_t(2.0 * h));
    out.bv = richardson(first_v(h), first_v(2.0 * h));
    out.btt = richardson(second_t(h), second_t(2.0 * h));
    out.btv = richardson(mixed(h), mixed(2.0 * h));
    return out;
}

Vec3 finite_difference_bvv(const RuledSurface& s, double t, double v) {
    const auto f = [&](double vv) { return s.point_extended(t, vv); };
    const Vec3 f0 = f(v);
    const auto second = [&](double h) { return (f(v + h) - 2.0 * f0 + f(v - h)) / (h * h); };
    return (4.0 * second(kFdStep) - second(2.0 * kFdStep)) / 3.0;
}

}  // namespace

FundamentalForms fundamental_forms(const RuledSurface& surface, double t, double v,
                                   FormMode mode) {
    RuledSurface::Partials p;
    Vec3 bvv = Vec3::Zero();
    if (mode == FormMode::Analytic) {
        p = surface.partials(t, v);
    } else {
        p = finite_difference_partials(surface, t, v);
        bvv = finite_difference_bvv(surface, t, v);
    }

    FundamentalForms out;
    out.G(0, 0) = p.bt.dot(p.bt);
    out.G(0, 1) = out.G(1, 0) = p.bt.dot(p.bv);
    out.G(1, 1) = p.bv.dot(p.bv);

    const double det_g = out.G(0, 0) * out.G(1, 1) - out.G(0, 1) * out.G(0, 1);
    const double scale2 = out.G(0, 0) * out.G(1, 1);
    if (scale2 == 0.0 || det_g <= kSingularSin * kSingularSin * scale2) {
        throw SingularMetricError("first fundamental form is singular");
    }
    const Vec3 normal = p.bt.cross(p.bv).normalized();

    out.B(0, 0) = p.btt.dot(normal);
    out.B(0, 1) = out.B(1, 0) = p.btv.dot(normal);
    out.B(1, 1) = bvv.dot(normal);  // identically zero in the analytic path
    out.K = (out.B(0, 0) * out.B(1, 1) - out.B(0, 1) * out.B(0, 1)) / det_g;
    return out;
}

FundamentalForms fundamental_forms(const DevelopablePatch& patch, double t, double v,
                                   FormMode mode) {
    return fundamental_forms(patch.surface, t, v, mode);
}

CurvatureProfile gaussian_curvature_profile(const RuledSurface& surface, double t0, double t1,
                                            int nt, int nv, FormMode mode) {
    if (nt < 2 || nv < 2) throw std::invalid_argument("curvature grid must be at least 2x2");
    CurvatureProfile out;
    out.nt = nt;
    out.nv = nv;
    out.bbox_diag = surface.bbox_diag();
    out.k.resize(nt, nv);

    const std::vector<double> tg = uniform_samples(t0, t1, nt);
    const std::vector<double> vg = uniform_samples(0.0, 1.0, nv);

    std::atomic<int> masked{0};
    parallel_for(static_cast<size_t>(nt) * nv, [&](size_t idx) {
        const int i = static_cast<int>(idx) / nv;
        const int j = static_cast<int>(idx) % nv;
        try {
            out.k(i, j) = fundamental_forms(surface, tg[i], vg[j], mode).K;
        } catch (const SingularMetricError&) {
            out.k(i, j) = std::numeric_limits<double>::quiet_NaN();
            masked.fetch_add(1);
        } catch (const std::domain_error&) {
            out.k(i, j) = std::numeric_limits<double>::quiet_NaN();
            masked.fetch_add(1);
        }
    });
    out.masked_cells = masked.load();

    const double diag2 = out.bbox_diag > 0 ? out.bbox_diag * out.bbox_diag : 1.0;
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < nv; ++j) {
            if (std::isnan(out.k(i, j))) continue;
            out.max_abs_normalised = std::max(out.max_abs_normalised,
                                              std::abs(out.k(i, j)) * diag2);
        }
    }
    return out;
}

CurvatureProfile gaussian_curvature_profile(const DevelopablePatch& patch, int nt, int nv,
                                            FormMode mode) {
    return gaussian_curvature_profile(patch.surface, patch.t_min(), patch.t_max(), nt, nv,
                                      mode);
}

double TriangleMesh::total_area() const {
    double area = 0.0;
    for (const auto& tri : triangles) {
        const Vec3 e1 = vertices[tri[1]] - vertices[tri[0]];
        const Vec3 e2 = vertices[tri[2]] - vertices[tri[0]];
        area += 0.5 * e1.cross(e2).norm();
    }
    return area;
}

TriangleMesh tessellate(const DevelopablePatch& patch, int nt, int nv) {
    if (nt < 2 || nv < 2) throw std::invalid_argument("tessellation grid must be at least 2x2");
    TriangleMesh mesh;
    mesh.nt = nt;
    mesh.nv = nv;
    const std::vector<double> tg = uniform_samples(patch.t_min(), patch.t_max(), nt);
    const std::vector<double> vg = uniform_samples(0.0, 1.0, nv);

    mesh.vertices.resize(static_cast<size_t>(nt) * nv);
    mesh.params.resize(mesh.vertices.size());
    parallel_for(mesh.vertices.size(), [&](size_t idx) {
        const int i = static_cast<int>(idx) / nv;
        const int j = static_cast<int>(idx) % nv;
        mesh.vertices[idx] = surface_point(patch, tg[i], vg[j]);
        mesh.params[idx] = Vec2(tg[i], vg[j]);
    });

    const auto index = [nv](int i, int j) { return i * nv + j; };
    for (int i = 0; i + 1 < nt; ++i) {
        for (int j = 0; j + 1 < nv; ++j) {
            mesh.triangles.push_back({index(i, j), index(i + 1, j), index(i + 1, j + 1)});
            mesh.triangles.push_back({index(i, j), index(i + 1, j + 1), index(i, j + 1)});
        }
    }
    return mesh;
}

namespace {

// Third triangle vertex from two placed vertices and the two remaining side
// lengths; the new vertex goes to the right of p -> q, which keeps the strip
// unfolding to +x from the y-axis seam with consistent winding.
Vec2 place_third(const Vec2& p, const Vec2& q, double r1, double r2) {
    const Vec2 pq = q - p;
    const double d = pq.norm();
    if (d <= 0.0) throw SingularRulingError("degenerate hinge while unrolling");
    const Vec2 u = pq / d;
    const double alpha = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    const double h = std::sqrt(std::max(r1 * r1 - alpha * alpha, 0.0));
    const Vec2 perp(u.y(), -u.x());
    return p + alpha * u + h * perp;
}

double polyline_length_3d(const std::vector<Vec3>& grid, int nt, int nv, int j) {
    double len = 0.0;
    for (int i = 0; i + 1 < nt; ++i) len += (grid[(i + 1) * nv + j] - grid[i * nv + j]).norm();
    return len;
}

double polyline_length_2d(const std::vector<Vec2>& grid, int nt, int nv, int j) {
    double len = 0.0;
    for (int i = 0; i + 1 < nt; ++i) len += (grid[(i + 1) * nv + j] - grid[i * nv + j]).norm();
    return len;
}

double relative_error(double got, double want) {
    const double denom = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / denom;
}

}  // namespace

PlanarDevelopment unroll(const DevelopablePatch& patch, int nt, int nv, double k_tol) {
    if (nt < 2 || nv < 2) throw std::invalid_argument("development grid must be at least 2x2");
    if (!patch.branch.monotone) {
        throw NotMonotoneError(
            "branch is not monotone: rulings would cross (regression area)");
    }
    const CurvatureProfile profile = gaussian_curvature_profile(patch, nt, nv);
    if (profile.masked_cells > 0) {
        throw SingularMetricError("curvature profile has singular cells; cannot certify");
    }
    if (profile.max_abs_normalised > k_tol) {
        throw NotDevelopableError(profile.max_abs_normalised);
    }

    const std::vector<double> tg = uniform_samples(patch.t_min(), patch.t_max(), nt);
    const std::vector<double> vg = uniform_samples(0.0, 1.0, nv);
    const auto index = [nv](int i, int j) { return i * nv + j; };

    std::vector<Vec3> grid3(static_cast<size_t>(nt) * nv);
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < nv; ++j) grid3[index(i, j)] = surface_point(patch, tg[i], vg[j]);
    }

    // Ruling endpoints: A on the c side (v=0), B on the d side (v=1).
    std::vector<Vec2> a2(nt), b2(nt);
    const Vec3 A0 = grid3[index(0, 0)], B0 = grid3[index(0, nv - 1)];
    const double L0 = (B0 - A0).norm();
    if (L0 <= 0.0) throw SingularRulingError("zero-length ruling at the seam");
    a2[0] = Vec2(0.0, 0.0);
    b2[0] = Vec2(0.0, L0);

    for (int i = 1; i < nt; ++i) {
        const Vec3 A = grid3[index(i, 0)], B = grid3[index(i, nv - 1)];
        const Vec3 Ap = grid3[index(i - 1, 0)], Bp = grid3[index(i - 1, nv - 1)];
        b2[i] = place_third(a2[i - 1], b2[i - 1], (B - Ap).norm(), (B - Bp).norm());
        a2[i] = place_third(a2[i - 1], b2[i], (A - Ap).norm(), (A - B).norm());
    }

    PlanarDevelopment dev;
    dev.nt = nt;
    dev.nv = nv;
    dev.vertices.resize(grid3.size());
    dev.params.resize(grid3.size());
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < nv; ++j) {
            dev.vertices[index(i, j)] = a2[i] + vg[j] * (b2[i] - a2[i]);
            dev.params[index(i, j)] = Vec2(tg[i], vg[j]);
        }
    }

    UnrollMetrics& m = dev.metrics;
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < nv; ++j) {
            if (i + 1 < nt) {
                const double l3 = (grid3[index(i + 1, j)] - grid3[index(i, j)]).norm();
                const double l2 = (dev.vertices[index(i + 1, j)] - dev.vertices[index(i, j)]).norm();
                m.max_edge_error = std::max(m.max_edge_error, relative_error(l2, l3));
            }
            if (j + 1 < nv) {
                const double l3 = (grid3[index(i, j + 1)] - grid3[index(i, j)]).norm();
                const double l2 = (dev.vertices[index(i, j + 1)] - dev.vertices[index(i, j)]).norm();
                m.max_edge_error = std::max(m.max_edge_error, relative_error(l2, l3));
            }
        }
    }
    for (int i = 1; i < nt; ++i) {
        const double d3 = (grid3[index(i, 0)] - grid3[index(i - 1, nv - 1)]).norm();
        const double d2 = (a2[i] - b2[i - 1]).norm();
        m.max_diagonal_drift = std::max(m.max_diagonal_drift, relative_error(d2, d3));
    }

    double area3 = 0.0, area2 = 0.0;
    for (int i = 0; i + 1 < nt; ++i) {
        for (int j = 0; j + 1 < nv; ++j) {
            const Vec3 p00 = grid3[index(i, j)], p10 = grid3[index(i + 1, j)];
            const Vec3 p11 = grid3[index(i + 1, j + 1)], p01 = grid3[index(i, j + 1)];
            area3 += 0.5 * ((p10 - p00).cross(p11 - p00)).norm();
            area3 += 0.5 * ((p11 - p00).cross(p01 - p00)).norm();
            const Vec2 q00 = dev.vertices[index(i, j)], q10 = dev.vertices[index(i + 1, j)];
            const Vec2 q11 = dev.vertices[index(i + 1, j + 1)],
                       q01 = dev.vertices[index(i, j + 1)];
            const auto tri_area = [](const Vec2& a, const Vec2& b, const Vec2& c) {
                return 0.5 * std::abs((b.x() - a.x()) * (c.y() - a.y()) -
                                      (c.x() - a.x()) * (b.y() - a.y()));
            };
            area2 += tri_area(q00, q10, q11) + tri_area(q00, q11, q01);
        }
    }
    m.area_error = relative_error(area2, area3);

    m.boundary_length_c_3d = polyline_length_3d(grid3, nt, nv, 0);
    m.boundary_length_c_2d = polyline_length_2d(dev.vertices, nt, nv, 0);
    m.boundary_length_d_3d = polyline_length_3d(grid3, nt, nv, nv - 1);
    m.boundary_length_d_2d = polyline_length_2d(dev.vertices, nt, nv, nv - 1);
    m.boundary_error_c = relative_error(m.boundary_length_c_2d, m.boundary_length_c_3d);
    m.boundary_error_d = relative_error(m.boundary_length_d_2d, m.boundary_length_d_3d);

    // Apex of the extended rulings: least-squares point minimising the sum of
    // squared distances to every ruling line. Near-parallel rulings (cylinder
    // case) leave the normal matrix rank-deficient: no apex then.
    Mat2 M = Mat2::Zero();
    Vec2 rhs = Vec2::Zero();
    for (int i = 0; i < nt; ++i) {
        const Vec2 dir = b2[i] - a2[i];
        const double len = dir.norm();
        if (len <= 0.0) continue;
        const Vec2 n(-dir.y() / len, dir.x() / len);
        M += n * n.transpose();
        rhs += n * n.dot(a2[i]);
    }
    Eigen::SelfAdjointEigenSolver<Mat2> es(M);
    const double lmin = es.eigenvalues()(0), lmax = es.eigenvalues()(1);
    const double diag3 = patch.surface.bbox_diag();
    if (lmax > 0.0 && lmin > 1e-9 * lmax) {
        const Vec2 apex = M.inverse() * rhs;
        double max_dist = 0.0;
        for (int i = 0; i < nt; ++i) {
            const Vec2 dir = b2[i] - a2[i];
            const double len = dir.norm();
            if (len <= 0.0) continue;
            const Vec2 n(-dir.y() / len, dir.x() / len);
            max_dist = std::max(max_dist, std::abs(n.dot(apex - a2[i])));
        }
        m.apex = apex;
        m.apex_residual_normalised = diag3 > 0 ? max_dist / diag3 : max_dist;
    }
    return dev;
}

}  // namespace devpatch
