#pragma once
// The reparametrised ruled surface b(t,v) = (1-v) c(t) + v d(T(t)), its
// differential geometry (unit normal, fundamental forms, Gaussian
// curvature), tessellation, and isometric unrolling into the plane.

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "devpatch/curve.hpp"
#include "devpatch/interpolate.hpp"
#include "devpatch/roots.hpp"

namespace devpatch {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

class SingularRulingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularMetricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotDevelopableError : public std::runtime_error {
public:
    explicit NotDevelopableError(double max_k_normalised);
    double max_k_normalised() const { return max_k_; }

private:
    double max_k_;
};

class NotMonotoneError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Ruled surface between two curves with an explicit reparametrisation T(t).
struct RuledSurface {
    NurbsCurve c;
    NurbsCurve d;
    MonotoneCubic reparam;  // T(t), shape-preserving through its samples

    // T = affine map of c's domain onto d's domain (plain ruled surface).
    static RuledSurface with_identity(NurbsCurve c, NurbsCurve d);

    Vec3 point(double t, double v) const;
    // Polynomial span extension for probes slightly outside the domain.
    Vec3 point_extended(double t, double v) const;

    struct Partials {
        Vec3 bt, bv, btt, btv;  // b_vv = 0 for every ruled parametrisation
    };
    Partials partials(double t, double v) const;

    double bbox_diag() const;  // joint control-point bounding box of c and d
};

struct FundamentalForms {
    Mat2 G = Mat2::Zero();  // first form: dot products of first partials
    Mat2 B = Mat2::Zero();  // second form: second partials projected on the normal
    double K = 0.0;         // Gaussian curvature det B / det G
};

enum class FormMode { Analytic, FiniteDifference };

// Curve pair, chosen branch, and the monotone interpolant through its samples.
struct DevelopablePatch {
    RuledSurface surface;
    ReparamBranch branch;

    static DevelopablePatch from_branch(NurbsCurve c, NurbsCurve d, ReparamBranch branch);

    double t_min() const { return branch.t_min; }
    double t_max() const { return branch.t_max; }
};

// b(t,v) with T from the interpolant; domain error outside branch range x [0,1].
Vec3 surface_point(const DevelopablePatch& patch, double t, double v);

// Unit surface normal at (t, v=0). Throws SingularRulingError when the ruling
// is parallel to the tangent (or either vanishes).
Vec3 ruling_normal(const RuledSurface& surface, double t);
Vec3 ruling_normal(const DevelopablePatch& patch, double t);

// G from first partials, B from normal projections of second partials,
// K = det B / det G. Analytic mode uses exact chain-rule partials through the
// interpolant; finite-difference mode uses central differences with step 1e-5
// Richardson-extrapolated against step 2e-5. Throws SingularMetricError at
// irregular points (det G ~ 0).
FundamentalForms fundamental_forms(const RuledSurface& surface, double t, double v,
                                   FormMode mode = FormMode::Analytic);
FundamentalForms fundamental_forms(const DevelopablePatch& patch, double t, double v,
                                   FormMode mode = FormMode::Analytic);

struct CurvatureProfile {
    Eigen::MatrixXd k;           // raw Gaussian curvature, NaN where masked
    int nt = 0, nv = 0;
    int masked_cells = 0;        // singular-metric samples
    double bbox_diag = 0.0;
    double max_abs_normalised = 0.0;  // max |K| * diag^2 over unmasked cells
};

CurvatureProfile gaussian_curvature_profile(const RuledSurface& surface, double t0, double t1,
                                            int nt, int nv,
                                            FormMode mode = FormMode::Analytic);
CurvatureProfile gaussian_curvature_profile(const DevelopablePatch& patch, int nt, int nv,
                                            FormMode mode = FormMode::Analytic);

struct TriangleMesh {
    int nt = 0, nv = 0;
    std::vector<Vec3> vertices;               // grid order, index = i*nv + j
    std::vector<Vec2> params;                 // (t, v) per vertex
    std::vector<std::array<int, 3>> triangles;  // oriented along the surface normal

    double total_area() const;
};

TriangleMesh tessellate(const DevelopablePatch& patch, int nt, int nv);

struct UnrollMetrics {
    double max_edge_error = 0.0;       // relative, over all grid edges
    double area_error = 0.0;           // relative, total area 3D vs 2D
    double boundary_error_c = 0.0;     // relative polyline-length error at v=0
    double boundary_error_d = 0.0;     // at v=1
    double max_diagonal_drift = 0.0;   // unused quad diagonal, relative
    double boundary_length_c_3d = 0.0, boundary_length_c_2d = 0.0;
    double boundary_length_d_3d = 0.0, boundary_length_d_2d = 0.0;
    std::optional<Vec2> apex;          // common point of extended rulings
    double apex_residual_normalised = 0.0;  // max line distance / bbox diag
};

struct PlanarDevelopment {
    int nt = 0, nv = 0;
    std::vector<Vec2> vertices;  // grid order, index = i*nv + j; seam ruling on the y-axis
    std::vector<Vec2> params;    // (t, v) per vertex
    UnrollMetrics metrics;
};

// Lays successive rulings into the plane, preserving ruling lengths, boundary
// segment lengths, and the ruling/chord angles (triangle congruence); the
// unused quad diagonal measures accumulated drift and is never corrected.
// Refuses non-monotone branches (NotMonotoneError) and patches whose
// normalised |K| exceeds k_tol (NotDevelopableError).
PlanarDevelopment unroll(const DevelopablePatch& patch, int nt, int nv = 2,
                         double k_tol = 1e-6);

}  // namespace devpatch
