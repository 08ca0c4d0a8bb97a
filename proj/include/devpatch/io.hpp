#pragma once
// File formats: curve JSON, branch CSV, OBJ meshes, planar-development CSV.
// All writers emit deterministic bytes for identical inputs.

#include <string>
#include <vector>

#include "devpatch/curve.hpp"
#include "devpatch/patch.hpp"
#include "devpatch/roots.hpp"

#include <json.hpp>

namespace devpatch {

// Curve JSON: { "degree": int, "knots": [real], "points": [[x,y,z]],
// "weights": [real] (optional, default all 1) }. The parsed curve is
// normalised onto the [0,1] domain. Throws std::runtime_error with a
// descriptive message on malformed input.
NurbsCurve parse_curve_json(const nlohmann::json& j, const std::string& context = "curve");
NurbsCurve load_curve(const std::string& path);

// Branch CSV: header "t,T,dT", one full-precision row per sample.
void save_branch_csv(const std::string& path, const ReparamBranch& branch);
std::vector<BranchSample> load_branch_samples(const std::string& path);

// Wavefront OBJ with a "# devpatch" header line, vertices then 1-based faces.
void write_mesh_obj(const std::string& path, const TriangleMesh& mesh);

// Planar development: OBJ at z=0 with the same triangulation, and CSV rows
// "t,v,x,y" in grid order.
void write_development_obj(const std::string& path, const PlanarDevelopment& dev);
void write_development_csv(const std::string& path, const PlanarDevelopment& dev);

}  // namespace devpatch
