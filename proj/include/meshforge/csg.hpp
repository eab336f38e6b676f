#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "meshforge/error.hpp"
#include "meshforge/mesh.hpp"
#include "meshforge/topology.hpp"

namespace meshforge {

namespace csg_detail {

// Vertices within this distance of a splitting plane count as on-plane.
// Scene geometry is centimeter-scale with 0.01 m smallest features, so
// 1e-5 m separates float noise from real offsets.
constexpr double plane_epsilon = 1e-5;

// Fragments below this area are dropped at emission; the vertex-on-edge
// repair reinstates any seam they covered.
constexpr double degenerate_area = 1e-12;

struct Plane {
    Vec3 normal{0, 0, 0};
    double w = 0.0;  // plane: dot(normal, p) == w

    static Plane from_points(const Vec3& a, const Vec3& b, const Vec3& c) {
        Plane p;
        p.normal = normalized(cross(b - a, c - a));
        p.w = dot(p.normal, a);
        return p;
    }
    bool valid() const { return length_squared(normal) > 0.5; }
    void flip() {
        normal = -normal;
        w = -w;
    }
};

struct Polygon {
    std::vector<Vec3> vertices;
    Plane plane;

    void flip() {
        std::reverse(vertices.begin(), vertices.end());
        plane.flip();
    }
};

enum : int { kCoplanar = 0, kFront = 1, kBack = 2, kSpanning = 3 };

// Splits polygon by plane into the four output lists. Fragments inherit
// the polygon's original plane; planes are never recomputed from split
// points.
inline void split_polygon(const Plane& plane, const Polygon& polygon,
                          std::vector<Polygon>& coplanar_front, std::vector<Polygon>& coplanar_back,
                          std::vector<Polygon>& front, std::vector<Polygon>& back) {
    int polygon_type = 0;
    std::vector<int> types;
    types.reserve(polygon.vertices.size());
    for (const Vec3& v : polygon.vertices) {
        const double t = dot(plane.normal, v) - plane.w;
        const int type = (t < -plane_epsilon) ? kBack : (t > plane_epsilon) ? kFront : kCoplanar;
        polygon_type |= type;
        types.push_back(type);
    }
    switch (polygon_type) {
        case kCoplanar:
            (dot(plane.normal, polygon.plane.normal) > 0 ? coplanar_front : coplanar_back)
                .push_back(polygon);
            break;
        case kFront:
            front.push_back(polygon);
            break;
        case kBack:
            back.push_back(polygon);
            break;
        case kSpanning: {
            std::vector<Vec3> f, b;
            const size_t n = polygon.vertices.size();
            for (size_t i = 0; i < n; ++i) {
                const size_t j = (i + 1) % n;
                const int ti = types[i], tj = types[j];
                const Vec3& vi = polygon.vertices[i];
                const Vec3& vj = polygon.vertices[j];
                if (ti != kBack) f.push_back(vi);
                if (ti != kFront) b.push_back(vi);
                if ((ti | tj) == kSpanning) {
                    const double t =
                        (plane.w - dot(plane.normal, vi)) / dot(plane.normal, vj - vi);
                    const Vec3 v = lerp(vi, vj, t);
                    f.push_back(v);
                    b.push_back(v);
                }
            }
            if (f.size() >= 3) front.push_back({std::move(f), polygon.plane});
            if (b.size() >= 3) back.push_back({std::move(b), polygon.plane});
            break;
        }
    }
}

// BSP node; the first polygon's plane becomes the splitter.
struct Node {
    Plane plane;
    bool has_plane = false;
    std::unique_ptr<Node> front;
    std::unique_ptr<Node> back;
    std::vector<Polygon> polygons;

    explicit Node(std::vector<Polygon> polys = {}) {
        if (!polys.empty()) build(std::move(polys));
    }

    void invert() {
        for (Polygon& p : polygons) p.flip();
        if (has_plane) plane.flip();
        if (front) front->invert();
        if (back) back->invert();
        std::swap(front, back);
    }

    // Removes from `list` everything inside this node's solid.
    std::vector<Polygon> clip_polygons(std::vector<Polygon> list) const {
        if (!has_plane) return list;
        std::vector<Polygon> list_front, list_back;
        for (const Polygon& p : list) {
            split_polygon(plane, p, list_front, list_back, list_front, list_back);
        }
        if (front) list_front = front->clip_polygons(std::move(list_front));
        if (back) {
            list_back = back->clip_polygons(std::move(list_back));
        } else {
            list_back.clear();
        }
        list_front.insert(list_front.end(), std::make_move_iterator(list_back.begin()),
                          std::make_move_iterator(list_back.end()));
        return list_front;
    }

    void clip_to(const Node& other) {
        polygons = other.clip_polygons(std::move(polygons));
        if (front) front->clip_to(other);
        if (back) back->clip_to(other);
    }

    void all_polygons(std::vector<Polygon>& out) const {
        out.insert(out.end(), polygons.begin(), polygons.end());
        if (front) front->all_polygons(out);
        if (back) back->all_polygons(out);
    }

    void build(std::vector<Polygon> polys) {
        if (polys.empty()) return;
        if (!has_plane) {
            plane = polys[0].plane;
            has_plane = true;
        }
        std::vector<Polygon> list_front, list_back;
        for (Polygon& p : polys) {
            split_polygon(plane, p, polygons, polygons, list_front, list_back);
        }
        if (!list_front.empty()) {
            if (!front) front = std::make_unique<Node>();
            front->build(std::move(list_front));
        }
        if (!list_back.empty()) {
            if (!back) back = std::make_unique<Node>();
            back->build(std::move(list_back));
        }
    }
};

inline std::vector<Polygon> mesh_to_polygons(const Mesh& mesh) {
    std::vector<Polygon> polys;
    polys.reserve(mesh.faces.size());
    for (const auto& f : mesh.faces) {
        Polygon p;
        p.vertices = {mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]};
        p.plane = Plane::from_points(p.vertices[0], p.vertices[1], p.vertices[2]);
        if (!p.plane.valid()) continue;  // degenerate input triangle
        polys.push_back(std::move(p));
    }
    return polys;
}

inline double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * length(cross(b - a, c - a));
}

// Splits faces whose edge passes through another vertex of the mesh. BSP
// clipping cuts the two sides of a shared edge independently, so one side
// can carry split points the other lacks; without this pass those seams
// read as open edges.
inline Mesh repair_edge_vertex_seams(Mesh mesh, double tolerance) {
    const double tol_sq = tolerance * tolerance;
    bool changed = true;
    int rounds = 0;
    while (changed && rounds++ < 64) {
        changed = false;
        const int nv = mesh.vertex_count();
        for (size_t fi = 0; fi < mesh.faces.size(); ++fi) {
            const auto f = mesh.faces[fi];
            int split_corner = -1;
            int split_vertex = -1;
            double best_t = 0.0;
            for (int k = 0; k < 3 && split_corner < 0; ++k) {
                const int ia = f[k];
                const int ib = f[(k + 1) % 3];
                const Vec3& a = mesh.vertices[ia];
                const Vec3& b = mesh.vertices[ib];
                const Vec3 ab = b - a;
                const double len_sq = length_squared(ab);
                if (len_sq <= tol_sq) continue;
                double nearest_t = 2.0;
                int nearest_q = -1;
                for (int q = 0; q < nv; ++q) {
                    if (q == f[0] || q == f[1] || q == f[2]) continue;
                    const Vec3& p = mesh.vertices[q];
                    const double t = dot(p - a, ab) / len_sq;
                    if (t <= 0.0 || t >= 1.0) continue;
                    if (length_squared(p - (a + ab * t)) > tol_sq) continue;
                    // interior hit; ends within tolerance belong to weld
                    if (length_squared(p - a) <= tol_sq || length_squared(p - b) <= tol_sq) continue;
                    if (t < nearest_t) {
                        nearest_t = t;
                        nearest_q = q;
                    }
                }
                if (nearest_q >= 0) {
                    split_corner = k;
                    split_vertex = nearest_q;
                    best_t = nearest_t;
                }
            }
            if (split_corner >= 0) {
                (void)best_t;
                const int ia = f[split_corner];
                const int ib = f[(split_corner + 1) % 3];
                const int ic = f[(split_corner + 2) % 3];
                mesh.faces[fi] = {ia, split_vertex, ic};
                mesh.faces.push_back({split_vertex, ib, ic});
                changed = true;
            }
        }
    }
    return mesh;
}

inline Mesh polygons_to_mesh(const std::vector<Polygon>& polygons) {
    Mesh soup;
    for (const Polygon& poly : polygons) {
        const size_t n = poly.vertices.size();
        for (size_t i = 1; i + 1 < n; ++i) {
            const Vec3& a = poly.vertices[0];
            const Vec3& b = poly.vertices[i];
            const Vec3& c = poly.vertices[i + 1];
            if (triangle_area(a, b, c) < degenerate_area) continue;
            const int base = soup.vertex_count();
            soup.vertices.push_back(a);
            soup.vertices.push_back(b);
            soup.vertices.push_back(c);
            soup.faces.push_back({base, base + 1, base + 2});
        }
    }
    Mesh welded = weld(soup, 1e-7);
    return repair_edge_vertex_seams(std::move(welded), 1e-7);
}

inline void require_solid_operand(const Mesh& mesh, const char* op, const char* side) {
    check_mesh(mesh);
    const auto edges = detail::edge_uses(mesh);
    for (const auto& [key, use] : edges) {
        if (use.faces != 2 || use.forward != 1 || use.backward != 1) {
            throw Error(std::string("invalid operand: ") + side + " mesh of " + op +
                        " is not a watertight consistently-wound solid");
        }
    }
}

}  // namespace csg_detail

// Boolean set operations over watertight triangle meshes via BSP
// clip-and-merge. Outputs come back welded (1e-7 m) with seam vertices
// stitched, so they pass the printability checks directly.

inline Mesh csg_union(const Mesh& a, const Mesh& b) {
    using namespace csg_detail;
    require_solid_operand(a, "union", "first");
    require_solid_operand(b, "union", "second");
    if (a.faces.empty()) return weld(b, 1e-7);
    if (b.faces.empty()) return weld(a, 1e-7);
    Node na(mesh_to_polygons(a));
    Node nb(mesh_to_polygons(b));
    na.clip_to(nb);
    nb.clip_to(na);
    nb.invert();
    nb.clip_to(na);
    nb.invert();
    std::vector<Polygon> rest;
    nb.all_polygons(rest);
    na.build(std::move(rest));
    std::vector<Polygon> out;
    na.all_polygons(out);
    return polygons_to_mesh(out);
}

inline Mesh csg_difference(const Mesh& a, const Mesh& b) {
    using namespace csg_detail;
    require_solid_operand(a, "difference", "first");
    require_solid_operand(b, "difference", "second");
    if (a.faces.empty() || b.faces.empty()) return weld(a, 1e-7);
    Node na(mesh_to_polygons(a));
    Node nb(mesh_to_polygons(b));
    na.invert();
    na.clip_to(nb);
    nb.clip_to(na);
    nb.invert();
    nb.clip_to(na);
    nb.invert();
    std::vector<Polygon> rest;
    nb.all_polygons(rest);
    na.build(std::move(rest));
    na.invert();
    std::vector<Polygon> out;
    na.all_polygons(out);
    return polygons_to_mesh(out);
}

inline Mesh csg_intersection(const Mesh& a, const Mesh& b) {
    using namespace csg_detail;
    require_solid_operand(a, "intersection", "first");
    require_solid_operand(b, "intersection", "second");
    if (a.faces.empty() || b.faces.empty()) return Mesh{};
    Node na(mesh_to_polygons(a));
    Node nb(mesh_to_polygons(b));
    na.invert();
    nb.clip_to(na);
    nb.invert();
    na.clip_to(nb);
    nb.clip_to(na);
    std::vector<Polygon> rest;
    nb.all_polygons(rest);
    na.build(std::move(rest));
    na.invert();
    std::vector<Polygon> out;
    na.all_polygons(out);
    return polygons_to_mesh(out);
}

}  // namespace meshforge
