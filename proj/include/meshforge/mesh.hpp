#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "meshforge/error.hpp"
#include "meshforge/vec3.hpp"

namespace meshforge {

// Indexed triangle mesh. Positions are in meters; faces are index triples
// with counter-clockwise winding seen from outside the solid.
struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int face_count() const { return static_cast<int>(faces.size()); }
    bool empty() const { return vertices.empty() && faces.empty(); }
};

struct Aabb {
    Vec3 min;
    Vec3 max;

    Vec3 extent() const { return max - min; }
    Vec3 center() const { return (min + max) * 0.5; }
    double longest_side() const {
        Vec3 e = extent();
        return std::fmax(e.x, std::fmax(e.y, e.z));
    }
    void expand(const Vec3& p) {
        min = min3(min, p);
        max = max3(max, p);
    }
};

// TRS record in the engine convention the construction scripts use:
// per-axis scale first, then Euler rotation (degrees), then translation.
struct Transform {
    Vec3 position{0, 0, 0};
    Vec3 rotation_degrees{0, 0, 0};
    Vec3 scale{1, 1, 1};
};

// Checks the structural mesh invariants: faces are triangles over valid,
// pairwise-distinct vertex indices. Throws Error naming the first violation.
inline void check_mesh(const Mesh& mesh) {
    const int nv = mesh.vertex_count();
    for (size_t i = 0; i < mesh.faces.size(); ++i) {
        const auto& f = mesh.faces[i];
        for (int k = 0; k < 3; ++k) {
            if (f[k] < 0 || f[k] >= nv) {
                throw Error("invalid mesh: face " + std::to_string(i) + " references vertex " +
                            std::to_string(f[k]) + " outside [0, " + std::to_string(nv) + ")");
            }
        }
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
            throw Error("invalid mesh: face " + std::to_string(i) + " repeats a vertex index");
        }
    }
}

namespace detail {

inline std::array<std::array<double, 3>, 3> rotation_matrix(const Vec3& degrees) {
    constexpr double to_rad = 3.14159265358979323846 / 180.0;
    const double cx = std::cos(degrees.x * to_rad), sx = std::sin(degrees.x * to_rad);
    const double cy = std::cos(degrees.y * to_rad), sy = std::sin(degrees.y * to_rad);
    const double cz = std::cos(degrees.z * to_rad), sz = std::sin(degrees.z * to_rad);
    // R = Ry * Rx * Rz: rotation about z is applied first, then x, then y,
    // all about the parent axes. This matches the engine convention the
    // transform tables were authored in.
    std::array<std::array<double, 3>, 3> r{};
    r[0][0] = cy * cz + sy * sx * sz;
    r[0][1] = -cy * sz + sy * sx * cz;
    r[0][2] = sy * cx;
    r[1][0] = cx * sz;
    r[1][1] = cx * cz;
    r[1][2] = -sx;
    r[2][0] = -sy * cz + cy * sx * sz;
    r[2][1] = sy * sz + cy * sx * cz;
    r[2][2] = cy * cx;
    return r;
}

inline Vec3 apply_matrix(const std::array<std::array<double, 3>, 3>& r, const Vec3& v) {
    return {r[0][0] * v.x + r[0][1] * v.y + r[0][2] * v.z,
            r[1][0] * v.x + r[1][1] * v.y + r[1][2] * v.z,
            r[2][0] * v.x + r[2][1] * v.y + r[2][2] * v.z};
}

inline bool is_zero_rotation(const Vec3& degrees) {
    return degrees.x == 0.0 && degrees.y == 0.0 && degrees.z == 0.0;
}

}  // namespace detail

// Maps every vertex to R(rotation) * (scale (.) v) + position. Topology is
// untouched. Scale components must be strictly positive.
inline Mesh apply_transform(const Mesh& mesh, const Transform& t) {
    if (!(t.scale.x > 0.0 && t.scale.y > 0.0 && t.scale.z > 0.0)) {
        throw Error("invalid transform: scale components must be strictly positive");
    }
    Mesh out;
    out.faces = mesh.faces;
    out.vertices.reserve(mesh.vertices.size());
    if (detail::is_zero_rotation(t.rotation_degrees)) {
        // Skip the matrix so zero-rotation transforms stay bit-exact.
        for (const Vec3& v : mesh.vertices) {
            out.vertices.push_back(hadamard(t.scale, v) + t.position);
        }
    } else {
        const auto r = detail::rotation_matrix(t.rotation_degrees);
        for (const Vec3& v : mesh.vertices) {
            out.vertices.push_back(detail::apply_matrix(r, hadamard(t.scale, v)) + t.position);
        }
    }
    return out;
}

inline Aabb bounding_box(const Mesh& mesh) {
    if (mesh.vertices.empty()) throw Error("empty mesh: bounding box undefined");
    Aabb box{mesh.vertices[0], mesh.vertices[0]};
    for (const Vec3& v : mesh.vertices) box.expand(v);
    return box;
}

// Maximum width, height, and depth: componentwise max - min over vertices.
inline Vec3 bounding_dimensions(const Mesh& mesh) { return bounding_box(mesh).extent(); }

// Scales vertices per-axis about the AABB center. Topology is untouched.
inline Mesh resize(const Mesh& mesh, const Vec3& factors) {
    if (!(factors.x > 0.0 && factors.y > 0.0 && factors.z > 0.0)) {
        throw Error("invalid resize: factors must be strictly positive");
    }
    if (mesh.vertices.empty()) throw Error("empty mesh: cannot resize");
    if (factors == Vec3{1, 1, 1}) return mesh;
    const Vec3 c = bounding_box(mesh).center();
    Mesh out;
    out.faces = mesh.faces;
    out.vertices.reserve(mesh.vertices.size());
    for (const Vec3& v : mesh.vertices) {
        out.vertices.push_back(c + hadamard(factors, v - c));
    }
    return out;
}

// Resizes so bounding_dimensions equals target_dims.
inline Mesh resize_to(const Mesh& mesh, const Vec3& target_dims) {
    if (!(target_dims.x > 0.0 && target_dims.y > 0.0 && target_dims.z > 0.0)) {
        throw Error("invalid resize: target dimensions must be strictly positive");
    }
    const Vec3 e = bounding_dimensions(mesh);
    if (!(e.x > 0.0 && e.y > 0.0 && e.z > 0.0)) {
        throw Error("invalid resize: mesh is flat along an axis, target unreachable");
    }
    return resize(mesh, {target_dims.x / e.x, target_dims.y / e.y, target_dims.z / e.z});
}

// Signed volume as the sum of tetrahedra (origin, v0, v1, v2) over all
// faces; positive when counter-clockwise faces point outward. No topology
// check; callers that need the watertightness precondition enforced use
// signed_volume from topology.hpp.
inline double signed_volume_unchecked(const Mesh& mesh) {
    double six_vol = 0.0;
    for (const auto& f : mesh.faces) {
        const Vec3& a = mesh.vertices[f[0]];
        const Vec3& b = mesh.vertices[f[1]];
        const Vec3& c = mesh.vertices[f[2]];
        six_vol += dot(a, cross(b, c));
    }
    return six_vol / 6.0;
}

inline Mesh reverse_winding(const Mesh& mesh) {
    Mesh out = mesh;
    for (auto& f : out.faces) std::swap(f[1], f[2]);
    return out;
}

// Merges vertices closer than epsilon, keeping first-occurrence order, and
// drops faces that collapse. Duplicate positions are never merged
// implicitly by other operations; topology checks on CSG output expect a
// weld at 1e-7 m first.
inline Mesh weld(const Mesh& mesh, double epsilon = 1e-7) {
    if (epsilon < 0.0) throw Error("invalid weld: epsilon must be non-negative");
    struct CellHash {
        size_t operator()(const std::array<int64_t, 3>& c) const {
            uint64_t h = 1469598103934665603ull;
            for (int64_t v : c) {
                h ^= static_cast<uint64_t>(v);
                h *= 1099511628211ull;
            }
            return static_cast<size_t>(h);
        }
    };
    const double cell = epsilon > 0.0 ? epsilon : 1.0;
    std::unordered_map<std::array<int64_t, 3>, std::vector<int>, CellHash> grid;
    std::vector<int> remap(mesh.vertices.size());
    Mesh out;
    out.vertices.reserve(mesh.vertices.size());
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3& p = mesh.vertices[i];
        const std::array<int64_t, 3> base = {static_cast<int64_t>(std::floor(p.x / cell)),
                                             static_cast<int64_t>(std::floor(p.y / cell)),
                                             static_cast<int64_t>(std::floor(p.z / cell))};
        int found = -1;
        for (int64_t dx = -1; dx <= 1 && found < 0; ++dx)
            for (int64_t dy = -1; dy <= 1 && found < 0; ++dy)
                for (int64_t dz = -1; dz <= 1 && found < 0; ++dz) {
                    auto it = grid.find({base[0] + dx, base[1] + dy, base[2] + dz});
                    if (it == grid.end()) continue;
                    for (int j : it->second) {
                        if (length_squared(out.vertices[j] - p) <= epsilon * epsilon) {
                            found = j;
                            break;
                        }
                    }
                }
        if (found >= 0) {
            remap[i] = found;
        } else {
            remap[i] = static_cast<int>(out.vertices.size());
            grid[base].push_back(remap[i]);
            out.vertices.push_back(p);
        }
    }
    out.faces.reserve(mesh.faces.size());
    for (const auto& f : mesh.faces) {
        std::array<int, 3> g = {remap[f[0]], remap[f[1]], remap[f[2]]};
        if (g[0] == g[1] || g[1] == g[2] || g[0] == g[2]) continue;
        out.faces.push_back(g);
    }
    // Drop vertices no face references (merge leftovers).
    std::vector<int> used(out.vertices.size(), -1);
    Mesh compact;
    compact.vertices.reserve(out.vertices.size());
    compact.faces.reserve(out.faces.size());
    for (const auto& f : out.faces) {
        std::array<int, 3> g{};
        for (int k = 0; k < 3; ++k) {
            if (used[f[k]] < 0) {
                used[f[k]] = static_cast<int>(compact.vertices.size());
                compact.vertices.push_back(out.vertices[f[k]]);
            }
            g[k] = used[f[k]];
        }
        compact.faces.push_back(g);
    }
    return compact;
}

}  // namespace meshforge
