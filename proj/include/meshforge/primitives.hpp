#pragma once

#include <cmath>
#include <string>

#include "meshforge/error.hpp"
#include "meshforge/mesh.hpp"

namespace meshforge {

// All primitives are unit-sized and centered at the origin; sizing and
// placement go through Transform so recorded TRS tables replay directly.

// Unit cube, side 1: 8 vertices, 12 triangles, outward winding.
inline Mesh make_cuboid() {
    Mesh m;
    m.vertices = {
        {-0.5, -0.5, -0.5}, {0.5, -0.5, -0.5}, {0.5, 0.5, -0.5}, {-0.5, 0.5, -0.5},
        {-0.5, -0.5, 0.5},  {0.5, -0.5, 0.5},  {0.5, 0.5, 0.5},  {-0.5, 0.5, 0.5},
    };
    m.faces = {
        {0, 3, 2}, {0, 2, 1},  // -z
        {4, 5, 6}, {4, 6, 7},  // +z
        {0, 1, 5}, {0, 5, 4},  // -y
        {3, 7, 6}, {3, 6, 2},  // +y
        {0, 4, 7}, {0, 7, 3},  // -x
        {1, 2, 6}, {1, 6, 5},  // +x
    };
    return m;
}

// Unit-diameter UV sphere centered at the origin, poles on the y axis.
// Per-axis scaling via Transform is how ellipsoids are made.
// V = sectors*(stacks-1) + 2, F = 2*sectors*(stacks-1).
inline Mesh make_sphere(int stacks = 16, int sectors = 24) {
    if (stacks < 3 || sectors < 3) {
        throw Error("invalid tessellation: sphere needs stacks >= 3 and sectors >= 3 (got " +
                    std::to_string(stacks) + ", " + std::to_string(sectors) + ")");
    }
    constexpr double pi = 3.14159265358979323846;
    const double r = 0.5;
    Mesh m;
    m.vertices.push_back({0, r, 0});  // north pole
    for (int i = 1; i < stacks; ++i) {
        const double theta = pi * i / stacks;
        const double y = r * std::cos(theta);
        const double ring = r * std::sin(theta);
        for (int j = 0; j < sectors; ++j) {
            const double phi = 2.0 * pi * j / sectors;
            m.vertices.push_back({ring * std::cos(phi), y, ring * std::sin(phi)});
        }
    }
    m.vertices.push_back({0, -r, 0});  // south pole
    const int south = static_cast<int>(m.vertices.size()) - 1;
    auto ring_vertex = [sectors](int ring, int j) { return 1 + ring * sectors + (j % sectors); };

    for (int j = 0; j < sectors; ++j) {
        m.faces.push_back({0, ring_vertex(0, j + 1), ring_vertex(0, j)});
    }
    for (int i = 0; i + 1 < stacks - 1; ++i) {
        for (int j = 0; j < sectors; ++j) {
            const int a = ring_vertex(i, j);
            const int b = ring_vertex(i, j + 1);
            const int c = ring_vertex(i + 1, j + 1);
            const int d = ring_vertex(i + 1, j);
            m.faces.push_back({a, b, c});
            m.faces.push_back({a, c, d});
        }
    }
    for (int j = 0; j < sectors; ++j) {
        m.faces.push_back({south, ring_vertex(stacks - 2, j), ring_vertex(stacks - 2, j + 1)});
    }
    return m;
}

// Unit-diameter, unit-height capped cylinder centered at the origin, axis
// along y. Caps are fans around center vertices so the poles stay manifold.
// V = 2*sectors + 2, F = 4*sectors.
inline Mesh make_cylinder(int sectors = 32) {
    if (sectors < 3) {
        throw Error("invalid tessellation: cylinder needs sectors >= 3 (got " +
                    std::to_string(sectors) + ")");
    }
    constexpr double pi = 3.14159265358979323846;
    const double r = 0.5;
    Mesh m;
    m.vertices.push_back({0, 0.5, 0});   // 0: top center
    m.vertices.push_back({0, -0.5, 0});  // 1: bottom center
    for (int j = 0; j < sectors; ++j) {
        const double phi = 2.0 * pi * j / sectors;
        m.vertices.push_back({r * std::cos(phi), 0.5, r * std::sin(phi)});
    }
    for (int j = 0; j < sectors; ++j) {
        const double phi = 2.0 * pi * j / sectors;
        m.vertices.push_back({r * std::cos(phi), -0.5, r * std::sin(phi)});
    }
    auto top = [sectors](int j) { return 2 + (j % sectors); };
    auto bottom = [sectors](int j) { return 2 + sectors + (j % sectors); };
    for (int j = 0; j < sectors; ++j) {
        m.faces.push_back({0, top(j + 1), top(j)});
        m.faces.push_back({1, bottom(j), bottom(j + 1)});
        m.faces.push_back({top(j), top(j + 1), bottom(j + 1)});
        m.faces.push_back({top(j), bottom(j + 1), bottom(j)});
    }
    return m;
}

enum class PrimitiveKind { cuboid, sphere, cylinder };

// Tessellation parameters: sphere uses stacks and sectors, cylinder only
// sectors, the cuboid neither.
struct PrimitiveSpec {
    PrimitiveKind kind = PrimitiveKind::cuboid;
    int stacks = 16;
    int sectors = 24;

    static PrimitiveSpec cuboid() { return {PrimitiveKind::cuboid, 0, 0}; }
    static PrimitiveSpec sphere(int stacks = 16, int sectors = 24) {
        return {PrimitiveKind::sphere, stacks, sectors};
    }
    static PrimitiveSpec cylinder(int sectors = 32) {
        return {PrimitiveKind::cylinder, 0, sectors};
    }
};

inline Mesh make_primitive(const PrimitiveSpec& spec) {
    switch (spec.kind) {
        case PrimitiveKind::cuboid: return make_cuboid();
        case PrimitiveKind::sphere: return make_sphere(spec.stacks, spec.sectors);
        case PrimitiveKind::cylinder: return make_cylinder(spec.sectors);
    }
    throw Error("unknown primitive kind");
}

}  // namespace meshforge
