#include "devpatch/report.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace devpatch {

BranchReport BranchReport::from(const ReparamBranch& branch) {
    BranchReport out;
    out.sample_count = static_cast<int>(branch.samples.size());
    out.monotone = branch.monotone;
    out.curvature_compatible = branch.curvature_compatible;
    out.signature_has_zero = branch.signature_has_zero;
    out.t_range[0] = branch.t_min;
    out.t_range[1] = branch.t_max;
    out.T_range[0] = branch.T_min;
    out.T_range[1] = branch.T_max;
    out.max_residual = branch.max_residual;
    return out;
}

std::string report_to_json(const VerificationReport& report) {
    using ordered_json = nlohmann::ordered_json;
    ordered_json j;
    j["schema"] = report.schema;
    j["command"] = report.command;

    ordered_json cls;
    cls["both_polynomial"] = report.both_polynomial;
    cls["planar_parallel"] = report.planar_parallel;
    cls["effective_degree"] = report.effective_degree;
    j["classification"] = cls;

    ordered_json degree;
    degree["bound"] = report.degree_bound_value;
    degree["observed_max"] = report.observed_degree_max;
    degree["degenerate_samples"] = report.degenerate_samples;
    j["condition_degree"] = degree;

    ordered_json branches = ordered_json::array();
    for (const BranchReport& b : report.branches) {
        ordered_json jb;
        jb["samples"] = b.sample_count;
        jb["monotone"] = b.monotone;
        jb["curvature_compatible"] = b.curvature_compatible;
        jb["signature_has_zero"] = b.signature_has_zero;
        jb["t_range"] = {b.t_range[0], b.t_range[1]};
        jb["T_range"] = {b.T_range[0], b.T_range[1]};
        jb["max_residual"] = b.max_residual;
        branches.push_back(jb);
    }
    j["branches"] = branches;
    j["branch_count"] = static_cast<int>(report.branches.size());

    ordered_json curvature;
    if (report.max_abs_k_normalised) {
        curvature["max_abs_k_normalised"] = *report.max_abs_k_normalised;
    } else {
        curvature["max_abs_k_normalised"] = nullptr;
    }
    curvature["masked_cells"] = report.masked_cells;
    j["curvature"] = curvature;

    if (report.max_branch_residual) {
        j["max_branch_residual"] = *report.max_branch_residual;
    }
    if (!report.residual_violations.empty()) {
        j["residual_violations"] = report.residual_violations;
    }

    if (report.unroll_metrics) {
        const UnrollMetrics& m = *report.unroll_metrics;
        ordered_json ju;
        ju["max_edge_error"] = m.max_edge_error;
        ju["area_error"] = m.area_error;
        ju["boundary_error_c"] = m.boundary_error_c;
        ju["boundary_error_d"] = m.boundary_error_d;
        ju["max_diagonal_drift"] = m.max_diagonal_drift;
        ju["boundary_length_c_3d"] = m.boundary_length_c_3d;
        ju["boundary_length_c_2d"] = m.boundary_length_c_2d;
        ju["boundary_length_d_3d"] = m.boundary_length_d_3d;
        ju["boundary_length_d_2d"] = m.boundary_length_d_2d;
        if (m.apex) {
            ju["apex"] = {m.apex->x(), m.apex->y()};
            ju["apex_residual_normalised"] = m.apex_residual_normalised;
        } else {
            ju["apex"] = nullptr;
        }
        j["unroll"] = ju;
    }

    ordered_json timings;
    for (const auto& [label, ms] : report.timings_ms) timings[label] = ms;
    j["timings_ms"] = timings;

    return j.dump(2) + "\n";
}

void write_report(const std::string& path, const VerificationReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << report_to_json(report);
}

}  // namespace devpatch
