#include "devpatch/roots.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "devpatch/parallel.hpp"

namespace devpatch {

namespace {

constexpr double kSeamDedupe = 1e-9;   // merge roots shared by adjacent spans
constexpr double kWindowFloor = 1e-6;  // additive slack of the matching window
constexpr double kMinRefineWidth = 1e-7;

struct RawPoint {
    double t = 0.0;
    double T = 0.0;
    bool extended = false;
};

struct RawBranch {
    std::vector<RawPoint> pts;
};

// Slope used to predict the next T: derivative formula, else secant over the
// last two points, else a unit-slope prior (t and T live on like-sized
// domains, so slope ~1 is the only scale available before any history).
double prediction_slope(const NurbsCurve& c, const NurbsCurve& d, const RawBranch& b) {
    const RawPoint& last = b.pts.back();
    if (auto f = reparam_derivative(c, d, last.t, last.T)) return *f;
    if (b.pts.size() >= 2) {
        const RawPoint& prev = b.pts[b.pts.size() - 2];
        if (last.t > prev.t) return (last.T - prev.T) / (last.t - prev.t);
    }
    return 1.0;
}

struct MatchingResult {
    std::vector<RawBranch> branches;
    std::vector<std::pair<double, double>> triggers;  // intervals to refine
};

MatchingResult run_matching(const NurbsCurve& c, const NurbsCurve& d,
                            const std::vector<double>& samples,
                            const std::map<double, RootSet>& root_sets, double gap_threshold) {
    MatchingResult out;
    std::vector<RawBranch> open;
    const double d_lo = d.t_min(), d_hi = d.t_max();

    for (size_t i = 0; i < samples.size(); ++i) {
        const double t = samples[i];
        const RootSet& rs = root_sets.at(t);

        if (open.empty() && i == 0) {
            for (double r : rs.roots) open.push_back(RawBranch{{RawPoint{t, r, false}}});
            continue;
        }
        const double t_prev = samples[i - 1];

        struct Pred {
            double value, window;
        };
        std::vector<Pred> preds(open.size());
        for (size_t bi = 0; bi < open.size(); ++bi) {
            const RawPoint& last = open[bi].pts.back();
            const double dt = t - last.t;
            const double slope = prediction_slope(c, d, open[bi]);
            preds[bi] = {last.T + slope * dt, 3.0 * std::abs(slope * dt) + kWindowFloor};
        }

        struct Candidate {
            double dist;
            size_t branch, root;
        };
        std::vector<Candidate> candidates;
        for (size_t bi = 0; bi < open.size(); ++bi) {
            for (size_t ri = 0; ri < rs.roots.size(); ++ri) {
                const double dist = std::abs(rs.roots[ri] - preds[bi].value);
                if (dist <= preds[bi].window) candidates.push_back({dist, bi, ri});
            }
        }
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
            if (a.dist != b.dist) return a.dist < b.dist;
            if (a.branch != b.branch) return a.branch < b.branch;
            return a.root < b.root;
        });

        std::vector<bool> branch_used(open.size(), false), root_used(rs.roots.size(), false);
        std::vector<double> assigned(open.size(), 0.0);
        for (const Candidate& cand : candidates) {
            if (branch_used[cand.branch] || root_used[cand.root]) continue;
            branch_used[cand.branch] = true;
            root_used[cand.root] = true;
            assigned[cand.branch] = rs.roots[cand.root];
        }

        std::vector<RawBranch> still_open;
        for (size_t bi = 0; bi < open.size(); ++bi) {
            RawBranch& b = open[bi];
            if (branch_used[bi]) {
                if (std::abs(assigned[bi] - b.pts.back().T) > gap_threshold) {
                    out.triggers.emplace_back(t_prev, t);
                }
                b.pts.push_back(RawPoint{t, assigned[bi], false});
                still_open.push_back(std::move(b));
            } else if (rs.degenerate) {
                b.pts.push_back(RawPoint{t, std::clamp(preds[bi].value, d_lo, d_hi), true});
                still_open.push_back(std::move(b));
            } else {
                out.triggers.emplace_back(t_prev, t);  // branch dies: resolve where
                out.branches.push_back(std::move(b));
            }
        }
        for (size_t ri = 0; ri < rs.roots.size(); ++ri) {
            if (root_used[ri]) continue;
            still_open.push_back(RawBranch{{RawPoint{t, rs.roots[ri], false}}});
            out.triggers.emplace_back(t_prev, t);  // branch born: resolve where
        }
        open = std::move(still_open);
    }
    for (RawBranch& b : open) out.branches.push_back(std::move(b));
    return out;
}

}  // namespace

RootSet isolate_roots(const ConditionPolynomial& p) {
    if (p.degenerate) {
        throw std::invalid_argument(
            "condition polynomial vanishes identically: the root set is a continuum");
    }
    RootSet rs;
    rs.t_value = p.t_value;
    const Polynomial poly{p.coefficients};
    const Polynomial dpoly = poly.derivative();
    const double dscale = 1.0 + dpoly.max_abs_coeff();
    for (double r : real_roots(poly, 0.0, 1.0)) {
        rs.roots.push_back(p.global_parameter(r));
        rs.multiple.push_back(std::abs(dpoly(r)) <= 1e-6 * dscale);
    }
    return rs;
}

RootSet combined_root_set(const NurbsCurve& c, const std::vector<PowerSpan>& spans, double t) {
    RootSet rs;
    rs.t_value = t;
    const Vec3 c_point = c.evaluate(t);
    const Vec3 c_vel = c.derivative(t, 1);

    std::vector<std::pair<double, bool>> found;
    for (const PowerSpan& span : spans) {
        const ConditionPolynomial p = assemble_condition(c_point, c_vel, span, t);
        if (p.degenerate) {
            rs.degenerate = true;
            continue;
        }
        const Polynomial poly{p.coefficients};
        const Polynomial dpoly = poly.derivative();
        const double dscale = 1.0 + dpoly.max_abs_coeff();
        for (double r : real_roots(poly, 0.0, 1.0)) {
            found.emplace_back(p.global_parameter(r), std::abs(dpoly(r)) <= 1e-6 * dscale);
        }
    }
    std::sort(found.begin(), found.end());
    for (const auto& [root, multiple] : found) {
        if (!rs.roots.empty() && root - rs.roots.back() <= kSeamDedupe) {
            rs.multiple.back() = rs.multiple.back() || multiple;
            continue;
        }
        rs.roots.push_back(root);
        rs.multiple.push_back(multiple);
    }
    return rs;
}

ReparamBranch annotate_branch(const NurbsCurve& c, const NurbsCurve& d,
                              std::vector<BranchSample> samples) {
    ReparamBranch br;
    br.samples = std::move(samples);
    const size_t n = br.samples.size();
    if (n == 0) return br;

    for (size_t i = 0; i < n; ++i) {
        BranchSample& s = br.samples[i];
        if (auto f = reparam_derivative(c, d, s.t, s.T)) {
            s.dT = *f;
        } else {
            const size_t lo = i > 0 ? i - 1 : i;
            const size_t hi = i + 1 < n ? i + 1 : i;
            s.dT = hi > lo ? (br.samples[hi].T - br.samples[lo].T) /
                                 (br.samples[hi].t - br.samples[lo].t)
                           : 0.0;
        }

        const Vec3 cp = c.derivative(s.t, 1);
        const Vec3 dd = d.derivative(s.T, 1);
        const Vec3 diff = d.evaluate(s.T) - c.evaluate(s.t);
        const double tp = cp.dot(dd.cross(diff));
        const double scale = 1.0 + cp.norm() * dd.norm() * diff.norm();
        br.max_residual = std::max(br.max_residual, std::abs(tp) / scale);

        if (auto normal = ruling_normal_at(c, d, s.t, s.T)) {
            const CurvatureSignature sig = curvature_signature(c, d, s.t, s.T, *normal);
            s.sign_c = sig.sign_c;
            s.sign_d = sig.sign_d;
            s.compatible = sig.compatible;
        } else {
            s.sign_c = s.sign_d = 0;
            s.compatible = false;
        }
    }

    br.monotone = n >= 2;
    br.curvature_compatible = true;
    for (size_t i = 0; i < n; ++i) {
        if (i + 1 < n && br.samples[i + 1].T <= br.samples[i].T) br.monotone = false;
        if (!br.samples[i].compatible) br.curvature_compatible = false;
        if (br.samples[i].sign_c == 0 || br.samples[i].sign_d == 0) br.signature_has_zero = true;
    }
    br.t_min = br.samples.front().t;
    br.t_max = br.samples.back().t;
    auto [lo, hi] = std::minmax_element(
        br.samples.begin(), br.samples.end(),
        [](const BranchSample& a, const BranchSample& b) { return a.T < b.T; });
    br.T_min = lo->T;
    br.T_max = hi->T;
    return br;
}

std::vector<ReparamBranch> trace_branches(const NurbsCurve& c, const NurbsCurve& d,
                                          const std::vector<double>& t_samples,
                                          const TraceOptions& options) {
    if (t_samples.size() < 2) {
        throw std::invalid_argument("trace_branches needs at least two t samples");
    }
    for (size_t i = 1; i < t_samples.size(); ++i) {
        if (!(t_samples[i] > t_samples[i - 1])) {
            throw std::invalid_argument("t samples must be strictly increasing");
        }
    }

    std::vector<PowerSpan> spans;
    for (const NurbsCurve& span : extract_bezier_spans(d)) {
        spans.push_back(PowerSpan::from_bezier(span));
    }

    std::vector<double> samples = t_samples;
    std::map<double, RootSet> root_sets;
    auto compute_missing = [&](const std::vector<double>& ts) {
        std::vector<double> missing;
        for (double t : ts) {
            if (!root_sets.count(t)) missing.push_back(t);
        }
        std::vector<RootSet> results(missing.size());
        parallel_for(missing.size(),
                     [&](size_t i) { results[i] = combined_root_set(c, spans, missing[i]); });
        for (size_t i = 0; i < missing.size(); ++i) root_sets[missing[i]] = std::move(results[i]);
    };

    compute_missing(samples);
    MatchingResult matched = run_matching(c, d, samples, root_sets, options.gap_threshold);
    for (int level = 0; level < options.refine_levels && !matched.triggers.empty(); ++level) {
        std::set<double> sample_set(samples.begin(), samples.end());
        std::vector<double> added;
        for (const auto& [a, b] : matched.triggers) {
            if (b - a <= kMinRefineWidth) continue;
            const double mid = 0.5 * (a + b);
            if (sample_set.insert(mid).second) added.push_back(mid);
        }
        if (added.empty()) break;
        compute_missing(added);
        samples.assign(sample_set.begin(), sample_set.end());
        matched = run_matching(c, d, samples, root_sets, options.gap_threshold);
    }

    // Coplanar everywhere: any T solves the condition. Return the canonical
    // affine branch as the planar patch's reparametrisation.
    bool all_degenerate = true;
    bool any_root = false;
    for (double t : samples) {
        const RootSet& rs = root_sets.at(t);
        all_degenerate = all_degenerate && rs.degenerate;
        any_root = any_root || !rs.roots.empty();
    }
    if (all_degenerate && !any_root) {
        const double t0 = samples.front(), t1 = samples.back();
        std::vector<BranchSample> identity;
        identity.reserve(samples.size());
        for (double t : samples) {
            BranchSample s;
            s.t = t;
            s.T = d.t_min() + (t - t0) / (t1 - t0) * (d.t_max() - d.t_min());
            s.extended = true;
            identity.push_back(s);
        }
        return {annotate_branch(c, d, std::move(identity))};
    }

    std::vector<ReparamBranch> branches;
    for (RawBranch& raw : matched.branches) {
        if (raw.pts.size() < 2) continue;
        std::vector<BranchSample> bs;
        bs.reserve(raw.pts.size());
        for (const RawPoint& p : raw.pts) {
            BranchSample s;
            s.t = p.t;
            s.T = p.T;
            s.extended = p.extended;
            bs.push_back(s);
        }
        branches.push_back(annotate_branch(c, d, std::move(bs)));
    }

    std::stable_sort(branches.begin(), branches.end(),
                     [](const ReparamBranch& a, const ReparamBranch& b) {
                         if (a.curvature_compatible != b.curvature_compatible) {
                             return a.curvature_compatible;
                         }
                         const double la = a.T_max - a.T_min, lb = b.T_max - b.T_min;
                         if (la != lb) return la > lb;
                         if (a.samples.front().T != b.samples.front().T) {
                             return a.samples.front().T < b.samples.front().T;
                         }
                         return a.t_min < b.t_min;
                     });
    return branches;
}

std::vector<double> uniform_samples(double a, double b, int n) {
    std::vector<double> out;
    if (n <= 0) return out;
    if (n == 1) return {a};
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
    out.back() = b;
    return out;
}

}  // namespace devpatch
