#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "meshforge/error.hpp"
#include "meshforge/mesh.hpp"
#include "meshforge/model_io.hpp"

namespace meshforge {

// Per-vertex displacement of a fixed-topology template. Length must equal
// the template's vertex count.
struct DisplacementField {
    std::vector<Vec3> displacements;

    size_t size() const { return displacements.size(); }
};

// Moves vertex i by field.displacements[i]. The face list is copied
// unchanged, so vertex/face counts and connectivity are invariant.
inline Mesh apply_displacement(const Mesh& tmpl, const DisplacementField& field) {
    if (field.size() != tmpl.vertices.size()) {
        throw Error("shape mismatch: field has " + std::to_string(field.size()) +
                    " displacements for " + std::to_string(tmpl.vertices.size()) + " vertices");
    }
    Mesh out;
    out.faces = tmpl.faces;
    out.vertices.resize(tmpl.vertices.size());
    for (size_t i = 0; i < tmpl.vertices.size(); ++i) {
        out.vertices[i] = tmpl.vertices[i] + field.displacements[i];
    }
    return out;
}

// Text format: one "dx dy dz" triple per non-blank line, LF endings.
inline DisplacementField parse_displacement(const std::string& text) {
    DisplacementField field;
    std::istringstream stream(text);
    std::string line;
    int line_number = 0;
    while (std::getline(stream, line)) {
        line_number++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto tokens = io_detail::split_ws(line);
        if (tokens.empty()) continue;
        if (tokens.size() != 3) {
            throw Error("displacement parse error at line " + std::to_string(line_number) +
                        ": expected 3 values, got " + std::to_string(tokens.size()));
        }
        Vec3 d;
        double* coords[3] = {&d.x, &d.y, &d.z};
        for (int k = 0; k < 3; ++k) {
            if (!io_detail::parse_double(tokens[k], *coords[k])) {
                throw Error("displacement parse error at line " + std::to_string(line_number) +
                            ": malformed number '" + tokens[k] + "'");
            }
        }
        field.displacements.push_back(d);
    }
    return field;
}

inline DisplacementField load_displacement(const std::filesystem::path& path) {
    return parse_displacement(read_file(path));
}

// Icosphere: regular icosahedron refined by recursive 1:4 triangle splits,
// midpoints projected back onto the sphere. Vertex count 10*4^n + 2, so
// n = 3 gives the 642-vertex deformation template. Radius 0.5, centered at
// the origin, genus 0 by construction.
inline Mesh make_icosphere(int subdivisions = 3) {
    if (subdivisions < 0 || subdivisions > 7) {
        throw Error("invalid icosphere subdivisions: " + std::to_string(subdivisions) +
                    " (need 0..7)");
    }
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    Mesh mesh;
    mesh.vertices = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
        {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
        {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
    };
    mesh.faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };
    const double radius = 0.5;
    auto project = [&](const Vec3& v) { return normalized(v) * radius; };
    for (Vec3& v : mesh.vertices) v = project(v);

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto midpoint_index = [&](int i, int j) {
            const std::pair<int, int> key{std::min(i, j), std::max(i, j)};
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const int idx = static_cast<int>(mesh.vertices.size());
            mesh.vertices.push_back(project((mesh.vertices[i] + mesh.vertices[j]) * 0.5));
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> refined;
        refined.reserve(mesh.faces.size() * 4);
        for (const auto& f : mesh.faces) {
            const int ab = midpoint_index(f[0], f[1]);
            const int bc = midpoint_index(f[1], f[2]);
            const int ca = midpoint_index(f[2], f[0]);
            refined.push_back({f[0], ab, ca});
            refined.push_back({f[1], bc, ab});
            refined.push_back({f[2], ca, bc});
            refined.push_back({ab, bc, ca});
        }
        mesh.faces = std::move(refined);
    }
    return mesh;
}

// The deformation template used throughout: 642 vertices, 1280 faces.
inline Mesh deformation_template() { return make_icosphere(3); }

}  // namespace meshforge
