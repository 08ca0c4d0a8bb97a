// devpatch: construct, verify, export, and unroll developable surface patches
// bounded by two NURBS curves.

#include <chrono>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "devpatch/condition.hpp"
#include "devpatch/curve.hpp"
#include "devpatch/io.hpp"
#include "devpatch/patch.hpp"
#include "devpatch/report.hpp"
#include "devpatch/roots.hpp"

namespace {

using namespace devpatch;

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        const auto now = std::chrono::steady_clock::now();
        return std::chrono::duration<double, std::milli>(now - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

struct GridSpec {
    int nt = 65;
    int nv = 9;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    if (std::sscanf(text.c_str(), "%d,%d", &g.nt, &g.nv) != 2 || g.nt < 2 || g.nv < 2) {
        throw std::runtime_error("--grid expects NT,NV with both at least 2 (got \"" + text +
                                 "\")");
    }
    return g;
}

// Max observed condition degree and degenerate-sample count over a t scan.
void condition_degree_scan(const NurbsCurve& c, const NurbsCurve& d,
                           const std::vector<double>& ts, VerificationReport& report) {
    std::vector<PowerSpan> spans;
    for (const NurbsCurve& span : extract_bezier_spans(d)) {
        spans.push_back(PowerSpan::from_bezier(span));
    }
    for (double t : ts) {
        const Vec3 c_point = c.evaluate(t);
        const Vec3 c_vel = c.derivative(t, 1);
        bool any_degenerate = false;
        for (const PowerSpan& span : spans) {
            const ConditionPolynomial p = assemble_condition(c_point, c_vel, span, t);
            if (p.degenerate) {
                any_degenerate = true;
                continue;
            }
            report.observed_degree_max = std::max(report.observed_degree_max,
                                                  p.observed_degree());
        }
        if (any_degenerate) ++report.degenerate_samples;
    }
}

void fill_classification(const NurbsCurve& c, const NurbsCurve& d, VerificationReport& report) {
    const CurvePairClassification cls = classify_pair(c, d);
    report.both_polynomial = cls.both_polynomial;
    report.planar_parallel = cls.planar_parallel;
    report.effective_degree = cls.effective_degree;
    report.degree_bound_value = degree_bound(cls);
}

int run_solve(const std::string& c_path, const std::string& d_path, int samples,
              const GridSpec& grid, double tol_residual, const std::string& output_prefix,
              std::string report_path) {
    const Stopwatch total;
    VerificationReport report;
    report.command = "solve";

    const NurbsCurve c = load_curve(c_path);
    const NurbsCurve d = load_curve(d_path);
    if (samples < 2) throw std::runtime_error("--samples must be at least 2");

    {
        const Stopwatch timer;
        fill_classification(c, d, report);
        report.timings_ms["classify"] = timer.ms();
    }

    const std::vector<double> ts = uniform_samples(0.0, 1.0, samples);
    {
        const Stopwatch timer;
        condition_degree_scan(c, d, ts, report);
        report.timings_ms["degree_scan"] = timer.ms();
    }

    std::vector<ReparamBranch> branches;
    {
        const Stopwatch timer;
        branches = trace_branches(c, d, ts);
        report.timings_ms["trace"] = timer.ms();
    }

    int monotone_count = 0;
    double max_residual = 0.0;
    for (size_t i = 0; i < branches.size(); ++i) {
        report.branches.push_back(BranchReport::from(branches[i]));
        if (branches[i].monotone) ++monotone_count;
        max_residual = std::max(max_residual, branches[i].max_residual);
        save_branch_csv(output_prefix + ".branch" + std::to_string(i) + ".csv", branches[i]);
    }
    if (!branches.empty()) report.max_branch_residual = max_residual;

    for (const ReparamBranch& b : branches) {
        if (!b.monotone) continue;
        const Stopwatch timer;
        const DevelopablePatch patch = DevelopablePatch::from_branch(c, d, b);
        const CurvatureProfile profile = gaussian_curvature_profile(patch, grid.nt, grid.nv);
        report.max_abs_k_normalised = profile.max_abs_normalised;
        report.masked_cells = profile.masked_cells;
        report.timings_ms["curvature"] = timer.ms();
        break;  // profile the top-ranked monotone branch
    }

    report.timings_ms["total"] = total.ms();
    if (report_path.empty()) report_path = output_prefix + ".report.json";
    write_report(report_path, report);

    std::cout << "branches=" << branches.size() << " monotone=" << monotone_count
              << " max_residual=" << max_residual << "\n";
    for (size_t i = 0; i < branches.size(); ++i) {
        const ReparamBranch& b = branches[i];
        std::cout << "branch " << i << ": samples=" << b.samples.size()
                  << " monotone=" << (b.monotone ? "yes" : "no")
                  << " curvature_compatible=" << (b.curvature_compatible ? "yes" : "no")
                  << " T=[" << b.T_min << "," << b.T_max << "]"
                  << " residual=" << b.max_residual << "\n";
    }
    if (monotone_count == 0) {
        std::cerr << "no monotone developable branch found (residual tolerance "
                  << tol_residual << ")\n";
        return 2;
    }
    return 0;
}

int run_verify(const std::string& c_path, const std::string& d_path,
               const std::string& branch_path, const GridSpec& grid, double tol_residual,
               double tol_curvature, std::string report_path) {
    const Stopwatch total;
    VerificationReport report;
    report.command = "verify";

    const NurbsCurve c = load_curve(c_path);
    const NurbsCurve d = load_curve(d_path);
    const std::vector<BranchSample> raw = load_branch_samples(branch_path);
    if (raw.size() < 2) throw std::runtime_error("branch file needs at least two samples");
    for (size_t i = 1; i < raw.size(); ++i) {
        if (!(raw[i].t > raw[i - 1].t)) {
            throw std::runtime_error("branch samples must have strictly increasing t");
        }
    }

    fill_classification(c, d, report);

    ReparamBranch branch;
    std::vector<double> violations;
    {
        const Stopwatch timer;
        branch = annotate_branch(c, d, raw);
        for (const BranchSample& s : branch.samples) {
            const Vec3 cp = c.derivative(s.t, 1);
            const Vec3 dd = d.derivative(s.T, 1);
            const Vec3 diff = d.evaluate(s.T) - c.evaluate(s.t);
            const double residual =
                std::abs(cp.dot(dd.cross(diff))) / (1.0 + cp.norm() * dd.norm() * diff.norm());
            if (residual > tol_residual) violations.push_back(s.t);
        }
        report.timings_ms["residuals"] = timer.ms();
    }
    report.branches.push_back(BranchReport::from(branch));
    report.max_branch_residual = branch.max_residual;
    report.residual_violations = violations;

    {
        const Stopwatch timer;
        const DevelopablePatch patch = DevelopablePatch::from_branch(c, d, branch);
        const CurvatureProfile profile = gaussian_curvature_profile(patch, grid.nt, grid.nv);
        report.max_abs_k_normalised = profile.max_abs_normalised;
        report.masked_cells = profile.masked_cells;
        report.timings_ms["curvature"] = timer.ms();
    }

    report.timings_ms["total"] = total.ms();
    if (!report_path.empty()) write_report(report_path, report);

    std::cout << "max_residual=" << branch.max_residual
              << " max_abs_k_normalised=" << *report.max_abs_k_normalised
              << " monotone=" << (branch.monotone ? "yes" : "no") << "\n";
    const bool curvature_ok = *report.max_abs_k_normalised <= tol_curvature;
    std::cout << "developable=" << (violations.empty() && curvature_ok ? "yes" : "no") << "\n";

    if (!violations.empty()) {
        std::cerr << "residual tolerance " << tol_residual << " violated at t:";
        for (double t : violations) std::cerr << ' ' << t;
        std::cerr << "\n";
        return 3;
    }
    return 0;
}

int run_export(const std::string& c_path, const std::string& d_path,
               const std::string& branch_path, const GridSpec& grid, bool allow_regression,
               const std::string& format, const std::string& output_path) {
    const NurbsCurve c = load_curve(c_path);
    const NurbsCurve d = load_curve(d_path);
    const std::vector<BranchSample> raw = load_branch_samples(branch_path);
    if (raw.size() < 2) throw std::runtime_error("branch file needs at least two samples");
    if (format != "obj") throw std::runtime_error("unsupported format: " + format);

    const ReparamBranch branch = annotate_branch(c, d, raw);
    if (!branch.monotone && !allow_regression) {
        std::cerr << "branch is not monotone (regression area); pass --allow-regression to "
                     "export anyway\n";
        return 2;
    }
    const DevelopablePatch patch = DevelopablePatch::from_branch(c, d, branch);
    write_mesh_obj(output_path, tessellate(patch, grid.nt, grid.nv));
    std::cout << "wrote " << output_path << " (" << grid.nt * grid.nv << " vertices, "
              << 2 * (grid.nt - 1) * (grid.nv - 1) << " faces)\n";
    return 0;
}

int run_unroll(const std::string& c_path, const std::string& d_path,
               const std::string& branch_path, const GridSpec& grid, double k_tol,
               const std::string& output_prefix, std::string report_path) {
    const Stopwatch total;
    VerificationReport report;
    report.command = "unroll";

    const NurbsCurve c = load_curve(c_path);
    const NurbsCurve d = load_curve(d_path);
    const std::vector<BranchSample> raw = load_branch_samples(branch_path);
    if (raw.size() < 2) throw std::runtime_error("branch file needs at least two samples");

    fill_classification(c, d, report);
    const ReparamBranch branch = annotate_branch(c, d, raw);
    report.branches.push_back(BranchReport::from(branch));
    report.max_branch_residual = branch.max_residual;

    const DevelopablePatch patch = DevelopablePatch::from_branch(c, d, branch);
    {
        const CurvatureProfile profile = gaussian_curvature_profile(patch, grid.nt, grid.nv);
        report.max_abs_k_normalised = profile.max_abs_normalised;
        report.masked_cells = profile.masked_cells;
    }

    PlanarDevelopment dev;
    try {
        const Stopwatch timer;
        dev = unroll(patch, grid.nt, grid.nv, k_tol);
        report.timings_ms["unroll"] = timer.ms();
    } catch (const NotDevelopableError& e) {
        std::cerr << e.what() << " (tolerance " << k_tol << ")\n";
        return 4;
    } catch (const NotMonotoneError& e) {
        std::cerr << e.what() << "\n";
        return 4;
    }

    report.unroll_metrics = dev.metrics;
    write_development_obj(output_prefix + ".dev.obj", dev);
    write_development_csv(output_prefix + ".dev.csv", dev);

    report.timings_ms["total"] = total.ms();
    if (report_path.empty()) report_path = output_prefix + ".report.json";
    write_report(report_path, report);

    std::cout << "max_edge_error=" << dev.metrics.max_edge_error
              << " area_error=" << dev.metrics.area_error
              << " drift=" << dev.metrics.max_diagonal_drift << "\n";
    if (dev.metrics.apex) {
        std::cout << "apex=(" << dev.metrics.apex->x() << "," << dev.metrics.apex->y()
                  << ") apex_residual_normalised=" << dev.metrics.apex_residual_normalised
                  << "\n";
    }
    std::cout << "wrote " << output_prefix << ".dev.obj " << output_prefix << ".dev.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Developable surface patches bounded by two NURBS curves"};
    app.require_subcommand(1);

    std::string c_path, d_path, branch_path;
    std::string grid_text = "65,9";
    std::string report_path;
    std::string output;
    std::string format = "obj";
    int samples = 257;
    double tol_residual = 1e-8;
    double tol_curvature = 1e-8;
    bool allow_regression = false;

    CLI::App* solve = app.add_subcommand("solve", "Trace reparametrisation branches T(t)");
    solve->add_option("c_file", c_path, "boundary curve c (JSON)")->required();
    solve->add_option("d_file", d_path, "boundary curve d (JSON)")->required();
    solve->add_option("--samples", samples, "number of t samples (default 257)");
    solve->add_option("--grid", grid_text, "curvature summary grid NT,NV (default 65,9)");
    solve->add_option("--tol-residual", tol_residual, "residual tolerance (default 1e-8)");
    solve->add_option("--output", output, "output prefix (default devpatch)");
    solve->add_option("--report", report_path, "report JSON path");

    CLI::App* verify = app.add_subcommand("verify", "Re-check a solved branch file");
    verify->add_option("c_file", c_path, "boundary curve c (JSON)")->required();
    verify->add_option("d_file", d_path, "boundary curve d (JSON)")->required();
    verify->add_option("branch_file", branch_path, "branch CSV (t,T,dT)")->required();
    verify->add_option("--grid", grid_text, "curvature grid NT,NV (default 65,9)");
    verify->add_option("--tol-residual", tol_residual, "residual tolerance (default 1e-8)");
    verify->add_option("--tol-curvature", tol_curvature,
                       "normalised curvature tolerance (default 1e-8)");
    verify->add_option("--report", report_path, "report JSON path");

    CLI::App* exporter = app.add_subcommand("export", "Tessellate a branch to a mesh");
    exporter->add_option("c_file", c_path, "boundary curve c (JSON)")->required();
    exporter->add_option("d_file", d_path, "boundary curve d (JSON)")->required();
    exporter->add_option("branch_file", branch_path, "branch CSV (t,T,dT)")->required();
    exporter->add_option("--grid", grid_text, "mesh grid NT,NV (default 65,9)");
    exporter->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"obj"}));
    exporter->add_flag("--allow-regression", allow_regression,
                       "export even when the branch is not monotone");
    exporter->add_option("--output", output, "output OBJ path (default devpatch.obj)");

    CLI::App* unroller = app.add_subcommand("unroll", "Develop a patch into the plane");
    unroller->add_option("c_file", c_path, "boundary curve c (JSON)")->required();
    unroller->add_option("d_file", d_path, "boundary curve d (JSON)")->required();
    unroller->add_option("branch_file", branch_path, "branch CSV (t,T,dT)")->required();
    unroller->add_option("--grid", grid_text, "development grid NT,NV (default 65,9)");
    CLI::Option* unroll_tol = unroller->add_option(
        "--tol-curvature", tol_curvature,
        "normalised curvature gate for unrolling (default 1e-6)");
    unroller->add_option("--output", output, "output prefix (default devpatch)");
    unroller->add_option("--report", report_path, "report JSON path");

    CLI11_PARSE(app, argc, argv);

    try {
        const GridSpec grid = parse_grid(grid_text);
        if (solve->parsed()) {
            return run_solve(c_path, d_path, samples, grid, tol_residual,
                             output.empty() ? "devpatch" : output, report_path);
        }
        if (verify->parsed()) {
            return run_verify(c_path, d_path, branch_path, grid, tol_residual, tol_curvature,
                              report_path);
        }
        if (exporter->parsed()) {
            return run_export(c_path, d_path, branch_path, grid, allow_regression, format,
                              output.empty() ? "devpatch.obj" : output);
        }
        if (unroller->parsed()) {
            const double k_tol = unroll_tol->count() > 0 ? tol_curvature : 1e-6;
            return run_unroll(c_path, d_path, branch_path, grid, k_tol,
                              output.empty() ? "devpatch" : output, report_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
