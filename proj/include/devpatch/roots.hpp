#pragma once
// Real roots of the developability condition per parameter sample, and
// continuation of those roots across samples into continuous candidate
// reparametrisation branches T(t).

#include <vector>

#include "devpatch/condition.hpp"
#include "devpatch/curve.hpp"

namespace devpatch {

// Roots of the condition polynomial at one t, in the global parameter of d.
struct RootSet {
    double t_value = 0.0;
    std::vector<double> roots;     // strictly increasing
    std::vector<bool> multiple;    // derivative below tolerance at the root
    bool degenerate = false;       // some span's condition vanished identically:
                                   // the solution set contains a continuum
};

struct BranchSample {
    double t = 0.0;
    double T = 0.0;
    double dT = 0.0;        // T'(t): determinant formula, secant fallback
    bool extended = false;  // placed by prediction across a degenerate sample
    int sign_c = 0;         // curvature signature at this sample
    int sign_d = 0;
    bool compatible = false;
};

struct ReparamBranch {
    std::vector<BranchSample> samples;  // t strictly increasing
    bool monotone = false;              // T strictly increasing across samples
    bool curvature_compatible = false;  // every sample's signature compatible
    bool signature_has_zero = false;    // some sample had a zero-classified sign
    double t_min = 0.0, t_max = 0.0;
    double T_min = 0.0, T_max = 0.0;
    double max_residual = 0.0;  // max |triple product| / (1 + |c'||d.||d-c|)
};

struct TraceOptions {
    int refine_levels = 4;        // adaptive subdivision passes
    double gap_threshold = 0.05;  // |dT| jump that triggers refinement
};

// All real roots of p over its span, mapped to the global parameter of d.
// Throws std::invalid_argument when p is flagged degenerate.
RootSet isolate_roots(const ConditionPolynomial& p);

// Union of isolate_roots over every span of d at fixed t, deduplicated at
// span seams. Spans whose condition vanishes identically set `degenerate`
// instead of contributing roots.
RootSet combined_root_set(const NurbsCurve& c, const std::vector<PowerSpan>& spans, double t);

// Root continuation over increasing t samples. Consecutive root sets are
// matched nearest-neighbour against the position predicted by T + T'*dt
// (secant estimate when the derivative formula is singular), window
// 3*|predicted step| + 1e-6. Unmatched roots open new branches; unmatched
// branches close, except across degenerate samples where they extend by
// prediction. Sampling is refined between samples where |dT| exceeds the
// gap threshold or where a branch opens/closes, up to refine_levels times.
// Branches are ranked by (curvature compatibility, T-range length) and the
// result is deterministic for identical inputs.
std::vector<ReparamBranch> trace_branches(const NurbsCurve& c, const NurbsCurve& d,
                                          const std::vector<double>& t_samples,
                                          const TraceOptions& options = {});

// Recompute derivatives, residuals, signatures, ranges, and the monotone
// flag for an externally supplied (t, T) sample list (e.g. a branch file).
ReparamBranch annotate_branch(const NurbsCurve& c, const NurbsCurve& d,
                              std::vector<BranchSample> samples);

std::vector<double> uniform_samples(double a, double b, int n);

}  // namespace devpatch
