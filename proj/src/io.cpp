#include "devpatch/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace devpatch {

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

[[noreturn]] void fail(const std::string& context, const std::string& message) {
    throw std::runtime_error(context + ": " + message);
}

}  // namespace

NurbsCurve parse_curve_json(const nlohmann::json& j, const std::string& context) {
    if (!j.is_object()) fail(context, "top level must be a JSON object");
    if (!j.contains("degree") || !j["degree"].is_number_integer()) {
        fail(context, "field \"degree\" must be an integer");
    }
    const int degree = j["degree"].get<int>();
    if (degree < 0) fail(context, "field \"degree\" must be non-negative");

    if (!j.contains("knots") || !j["knots"].is_array()) {
        fail(context, "field \"knots\" must be an array of reals");
    }
    std::vector<double> knots;
    for (const auto& k : j["knots"]) {
        if (!k.is_number()) fail(context, "field \"knots\" must contain only numbers");
        knots.push_back(k.get<double>());
    }

    if (!j.contains("points") || !j["points"].is_array() || j["points"].empty()) {
        fail(context, "field \"points\" must be a non-empty array of [x,y,z] triples");
    }
    std::vector<ControlPoint> points;
    for (const auto& p : j["points"]) {
        if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() ||
            !p[2].is_number()) {
            fail(context, "field \"points\" must contain [x,y,z] triples");
        }
        ControlPoint cp;
        cp.position = Vec3(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
        points.push_back(cp);
    }

    if (j.contains("weights")) {
        if (!j["weights"].is_array() || j["weights"].size() != points.size()) {
            fail(context, "field \"weights\" must be an array matching \"points\" in length");
        }
        for (size_t i = 0; i < points.size(); ++i) {
            if (!j["weights"][i].is_number()) {
                fail(context, "field \"weights\" must contain only numbers");
            }
            points[i].weight = j["weights"][i].get<double>();
        }
    }

    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "degree" && key != "knots" && key != "points" && key != "weights") {
            fail(context, "unknown field \"" + key + "\"");
        }
    }

    try {
        return NurbsCurve(degree, std::move(knots), std::move(points)).with_domain(0.0, 1.0);
    } catch (const std::invalid_argument& e) {
        fail(context, e.what());
    }
}

NurbsCurve load_curve(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open curve file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("curve file " + path + ": " + e.what());
    }
    return parse_curve_json(j, "curve file " + path);
}

void save_branch_csv(const std::string& path, const ReparamBranch& branch) {
    std::ofstream out = open_out(path);
    out << "t,T,dT\n";
    for (const BranchSample& s : branch.samples) {
        out << fmt(s.t) << ',' << fmt(s.T) << ',' << fmt(s.dT) << '\n';
    }
}

std::vector<BranchSample> load_branch_samples(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open branch file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("branch file " + path + ": empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,T,dT") {
        throw std::runtime_error("branch file " + path + ": header must be \"t,T,dT\"");
    }

    std::vector<BranchSample> samples;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        BranchSample s;
        const char* p = line.c_str();
        char* end = nullptr;
        double values[3];
        for (int k = 0; k < 3; ++k) {
            values[k] = std::strtod(p, &end);
            if (end == p) {
                throw std::runtime_error("branch file " + path + ": bad number on line " +
                                         std::to_string(lineno));
            }
            p = end;
            if (k < 2) {
                if (*p != ',') {
                    throw std::runtime_error("branch file " + path +
                                             ": expected comma on line " +
                                             std::to_string(lineno));
                }
                ++p;
            }
        }
        while (*p == ' ') ++p;
        if (*p != '\0') {
            throw std::runtime_error("branch file " + path + ": trailing content on line " +
                                     std::to_string(lineno));
        }
        s.t = values[0];
        s.T = values[1];
        s.dT = values[2];
        samples.push_back(s);
    }
    return samples;
}

void write_mesh_obj(const std::string& path, const TriangleMesh& mesh) {
    std::ofstream out = open_out(path);
    out << "# devpatch\n";
    for (const Vec3& v : mesh.vertices) {
        out << "v " << fmt(v.x()) << ' ' << fmt(v.y()) << ' ' << fmt(v.z()) << '\n';
    }
    for (const auto& f : mesh.triangles) {
        out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    }
}

void write_development_obj(const std::string& path, const PlanarDevelopment& dev) {
    std::ofstream out = open_out(path);
    out << "# devpatch\n";
    for (const Vec2& v : dev.vertices) {
        out << "v " << fmt(v.x()) << ' ' << fmt(v.y()) << " 0\n";
    }
    const auto index = [&](int i, int j) { return i * dev.nv + j + 1; };  // 1-based
    for (int i = 0; i + 1 < dev.nt; ++i) {
        for (int j = 0; j + 1 < dev.nv; ++j) {
            out << "f " << index(i, j) << ' ' << index(i + 1, j) << ' ' << index(i + 1, j + 1)
                << '\n';
            out << "f " << index(i, j) << ' ' << index(i + 1, j + 1) << ' ' << index(i, j + 1)
                << '\n';
        }
    }
}

void write_development_csv(const std::string& path, const PlanarDevelopment& dev) {
    std::ofstream out = open_out(path);
    out << "t,v,x,y\n";
    for (size_t idx = 0; idx < dev.vertices.size(); ++idx) {
        out << fmt(dev.params[idx].x()) << ',' << fmt(dev.params[idx].y()) << ','
            << fmt(dev.vertices[idx].x()) << ',' << fmt(dev.vertices[idx].y()) << '\n';
    }
}

}  // namespace devpatch
