#pragma once
// Machine-readable verification report shared by the CLI commands.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "devpatch/patch.hpp"

namespace devpatch {

struct BranchReport {
    int sample_count = 0;
    bool monotone = false;
    bool curvature_compatible = false;
    bool signature_has_zero = false;
    double t_range[2] = {0.0, 0.0};
    double T_range[2] = {0.0, 0.0};
    double max_residual = 0.0;

    static BranchReport from(const ReparamBranch& branch);
};

struct VerificationReport {
    int schema = 1;
    std::string command;

    bool both_polynomial = false;
    bool planar_parallel = false;
    int effective_degree = 0;
    int degree_bound_value = 0;
    int observed_degree_max = -1;  // max over sampled t and spans
    int degenerate_samples = 0;

    std::vector<BranchReport> branches;

    std::optional<double> max_abs_k_normalised;
    int masked_cells = 0;

    std::optional<double> max_branch_residual;
    std::vector<double> residual_violations;  // offending t values

    std::optional<UnrollMetrics> unroll_metrics;

    std::map<std::string, double> timings_ms;
};

// Deterministic pretty-printed JSON (field order fixed; timings are the only
// run-dependent values).
std::string report_to_json(const VerificationReport& report);

void write_report(const std::string& path, const VerificationReport& report);

}  // namespace devpatch
