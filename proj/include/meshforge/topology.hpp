#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "meshforge/error.hpp"
#include "meshforge/mesh.hpp"

namespace meshforge {

struct PrintabilityReport {
    bool watertight = false;
    bool manifold = false;
    bool consistent_winding = false;
    std::optional<int> genus;  // defined only for watertight manifold single-component meshes
    int component_count = 0;

    bool printable() const { return watertight && manifold && consistent_winding; }
};

namespace detail {

struct EdgeUse {
    int faces = 0;     // incident face count
    int forward = 0;   // traversals as (lo, hi)
    int backward = 0;  // traversals as (hi, lo)
};

// Undirected edge map keyed on exact index pairs. Duplicate vertex
// positions are not merged here; weld first when checking CSG output.
inline std::map<std::pair<int, int>, EdgeUse> edge_uses(const Mesh& mesh) {
    std::map<std::pair<int, int>, EdgeUse> edges;
    for (const auto& f : mesh.faces) {
        for (int k = 0; k < 3; ++k) {
            const int a = f[k];
            const int b = f[(k + 1) % 3];
            auto& use = edges[{std::min(a, b), std::max(a, b)}];
            use.faces++;
            (a < b ? use.forward : use.backward)++;
        }
    }
    return edges;
}

// Connected components over faces, adjacent when sharing an undirected edge.
inline std::vector<int> face_components(const Mesh& mesh, int* count_out) {
    std::map<std::pair<int, int>, std::vector<int>> edge_faces;
    for (size_t i = 0; i < mesh.faces.size(); ++i) {
        const auto& f = mesh.faces[i];
        for (int k = 0; k < 3; ++k) {
            const int a = f[k];
            const int b = f[(k + 1) % 3];
            edge_faces[{std::min(a, b), std::max(a, b)}].push_back(static_cast<int>(i));
        }
    }
    std::vector<int> comp(mesh.faces.size(), -1);
    int count = 0;
    std::vector<int> stack;
    for (size_t seed = 0; seed < mesh.faces.size(); ++seed) {
        if (comp[seed] >= 0) continue;
        comp[seed] = count;
        stack.push_back(static_cast<int>(seed));
        while (!stack.empty()) {
            const int fi = stack.back();
            stack.pop_back();
            const auto& f = mesh.faces[fi];
            for (int k = 0; k < 3; ++k) {
                const int a = f[k];
                const int b = f[(k + 1) % 3];
                for (int nb : edge_faces[{std::min(a, b), std::max(a, b)}]) {
                    if (comp[nb] < 0) {
                        comp[nb] = count;
                        stack.push_back(nb);
                    }
                }
            }
        }
        count++;
    }
    if (count_out) *count_out = count;
    return comp;
}

// A vertex star is a disk when the faces around the vertex form a single
// edge-connected group. Bowtie vertices (two fans joined at a point) fail.
inline bool vertex_stars_are_disks(const Mesh& mesh) {
    std::vector<std::vector<int>> incident(mesh.vertices.size());
    for (size_t i = 0; i < mesh.faces.size(); ++i) {
        for (int k = 0; k < 3; ++k) incident[mesh.faces[i][k]].push_back(static_cast<int>(i));
    }
    std::vector<int> stack;
    for (size_t v = 0; v < mesh.vertices.size(); ++v) {
        const auto& star = incident[v];
        if (star.size() <= 1) continue;  // unreferenced or lone face: nothing to fan
        // Adjacency within the star: two faces connected when they share an
        // edge through v.
        std::map<std::pair<int, int>, std::vector<int>> at_v;
        for (int fi : star) {
            const auto& f = mesh.faces[fi];
            for (int k = 0; k < 3; ++k) {
                const int a = f[k];
                const int b = f[(k + 1) % 3];
                if (a == static_cast<int>(v) || b == static_cast<int>(v)) {
                    at_v[{std::min(a, b), std::max(a, b)}].push_back(fi);
                }
            }
        }
        std::map<int, int> mark;
        stack.assign(1, star[0]);
        mark[star[0]] = 1;
        size_t reached = 0;
        while (!stack.empty()) {
            const int fi = stack.back();
            stack.pop_back();
            reached++;
            const auto& f = mesh.faces[fi];
            for (int k = 0; k < 3; ++k) {
                const int a = f[k];
                const int b = f[(k + 1) % 3];
                if (a != static_cast<int>(v) && b != static_cast<int>(v)) continue;
                for (int nb : at_v[{std::min(a, b), std::max(a, b)}]) {
                    if (!mark.count(nb)) {
                        mark[nb] = 1;
                        stack.push_back(nb);
                    }
                }
            }
        }
        if (reached != star.size()) return false;
    }
    return true;
}

inline int referenced_vertex_count(const Mesh& mesh) {
    std::vector<char> used(mesh.vertices.size(), 0);
    for (const auto& f : mesh.faces)
        for (int k = 0; k < 3; ++k) used[f[k]] = 1;
    int n = 0;
    for (char u : used) n += u;
    return n;
}

}  // namespace detail

// Full printability analysis. Never throws; failures are encoded in the
// report. An empty mesh is vacuously watertight with zero components.
inline PrintabilityReport validate_printable(const Mesh& mesh) {
    check_mesh(mesh);
    PrintabilityReport report;
    const auto edges = detail::edge_uses(mesh);

    report.watertight = true;
    report.consistent_winding = true;
    bool edge_manifold = true;
    for (const auto& [key, use] : edges) {
        if (use.faces != 2) report.watertight = false;
        if (use.faces > 2) edge_manifold = false;
        if (use.forward > 1 || use.backward > 1) report.consistent_winding = false;
    }
    report.manifold = edge_manifold && detail::vertex_stars_are_disks(mesh);

    int components = 0;
    detail::face_components(mesh, &components);
    report.component_count = components;

    if (report.watertight && report.manifold && components == 1) {
        const int v = detail::referenced_vertex_count(mesh);
        const int e = static_cast<int>(edges.size());
        const int f = mesh.face_count();
        report.genus = (2 - v + e - f) / 2;
    }
    return report;
}

// Genus from the Euler characteristic, g = (2 - V + E - F) / 2, with E the
// number of distinct undirected index-pair edges. Requires a watertight
// manifold single-component mesh; throws naming the failed check.
inline int euler_genus(const Mesh& mesh) {
    const PrintabilityReport report = validate_printable(mesh);
    if (!report.watertight) throw Error("topology undefined: mesh is not watertight");
    if (!report.manifold) throw Error("topology undefined: mesh is not manifold");
    if (report.component_count != 1) {
        throw Error("topology undefined: component_count=" +
                    std::to_string(report.component_count) + ", expected 1");
    }
    return *report.genus;
}

// Signed volume with the watertight/consistent-winding precondition
// enforced; see signed_volume_unchecked for the bare sum.
inline double signed_volume(const Mesh& mesh) {
    const auto edges = detail::edge_uses(mesh);
    for (const auto& [key, use] : edges) {
        if (use.faces != 2) {
            throw Error("undefined volume: mesh is not watertight (edge " +
                        std::to_string(key.first) + "-" + std::to_string(key.second) +
                        " bounds " + std::to_string(use.faces) + " faces)");
        }
        if (use.forward != 1 || use.backward != 1) {
            throw Error("undefined volume: inconsistent winding at edge " +
                        std::to_string(key.first) + "-" + std::to_string(key.second));
        }
    }
    return signed_volume_unchecked(mesh);
}

}  // namespace meshforge
