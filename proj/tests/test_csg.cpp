#include <catch2/catch_amalgamated.hpp>

#include "meshforge/csg.hpp"
#include "meshforge/primitives.hpp"
#include "meshforge/topology.hpp"
#include "support/oracles.hpp"

using namespace meshforge;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using oracles::make_box;

namespace {

void require_printable(const Mesh& m, const char* what) {
    INFO(what);
    const auto report = validate_printable(m);
    CHECK(report.watertight);
    CHECK(report.manifold);
    CHECK(report.consistent_winding);
    REQUIRE(report.printable());
}

}  // namespace

TEST_CASE("slot cut through a cube leaves three quarters of the volume") {
    const Mesh cube = make_cuboid();
    const Mesh slot = make_box({0, 0, 0}, {0.5, 2.0, 0.5});
    const Mesh out = csg_difference(cube, slot);
    require_printable(out, "cube minus slot");
    REQUIRE_THAT(signed_volume(out), WithinAbs(0.75, 1e-6));
}

TEST_CASE("half-offset cubes intersect in half a cube") {
    const Mesh a = make_cuboid();
    const Mesh b = make_box({0.5, 0, 0}, {1, 1, 1});
    const Mesh out = csg_intersection(a, b);
    require_printable(out, "offset intersection");
    REQUIRE_THAT(signed_volume(out), WithinAbs(0.5, 1e-6));
}

TEST_CASE("disjoint union keeps both volumes exactly") {
    const Mesh a = make_box({-1.5, 0, 0}, {1, 1, 1});
    const Mesh b = make_box({1.5, 0, 0}, {1, 1, 1});
    const Mesh out = csg_union(a, b);
    REQUIRE_THAT(signed_volume(out), WithinAbs(2.0, 1e-9));
    const auto report = validate_printable(out);
    REQUIRE(report.component_count == 2);
    REQUIRE(report.watertight);
    REQUIRE(report.consistent_winding);
}

TEST_CASE("boolean identities against exact box oracles") {
    const Aabb box_a{{-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}};
    const Aabb box_b{{0.1, -0.2, -0.7}, {0.9, 0.6, 0.3}};
    const Mesh a = oracles::mesh_of(box_a);
    const Mesh b = oracles::mesh_of(box_b);

    const double va = oracles::box_volume(box_a);
    const double vb = oracles::box_volume(box_b);
    const double vab = oracles::exact_box_intersection_volume(box_a, box_b);
    const double vunion = oracles::exact_box_union_volume({box_a, box_b});

    const Mesh u = csg_union(a, b);
    const Mesh i = csg_intersection(a, b);
    const Mesh d = csg_difference(a, b);
    require_printable(u, "union");
    require_printable(i, "intersection");
    require_printable(d, "difference");

    REQUIRE_THAT(signed_volume(u), WithinRel(vunion, 1e-9));
    REQUIRE_THAT(signed_volume(i), WithinRel(vab, 1e-9));
    REQUIRE_THAT(signed_volume(d), WithinRel(va - vab, 1e-9));
    // inclusion-exclusion straight from the meshes
    REQUIRE_THAT(signed_volume(u) + signed_volume(i), WithinRel(va + vb, 1e-9));
}

TEST_CASE("seeded random box pairs satisfy the boolean algebra") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        const auto pair = oracles::random_box_pair(rng);
        const Mesh a = oracles::mesh_of(pair.a);
        const Mesh b = oracles::mesh_of(pair.b);
        const double va = oracles::box_volume(pair.a);
        const double vb = oracles::box_volume(pair.b);
        const double denominator = va + vb;

        const Mesh u = csg_union(a, b);
        const Mesh i = csg_intersection(a, b);
        const Mesh d = csg_difference(a, b);
        INFO("trial " << trial);
        const double vu = signed_volume(u);
        const double vi = i.faces.empty() ? 0.0 : signed_volume(i);
        const double vd = signed_volume(d);
        REQUIRE_THAT((vu + vi) / denominator, WithinAbs((va + vb) / denominator, 1e-6));
        REQUIRE_THAT((vd + vi) / denominator, WithinAbs(va / denominator, 1e-6));
        require_printable(weld(u), "union");
        require_printable(weld(d), "difference");
        if (!i.faces.empty()) require_printable(weld(i), "intersection");
    }
}

TEST_CASE("identical operands collapse to the obvious results") {
    const Mesh cube = make_cuboid();
    const Mesh u = csg_union(cube, make_cuboid());
    REQUIRE_THAT(signed_volume(u), WithinAbs(1.0, 1e-9));
    require_printable(u, "self union");
    const Mesh i = csg_intersection(cube, make_cuboid());
    REQUIRE_THAT(signed_volume(i), WithinAbs(1.0, 1e-9));
    const Mesh d = csg_difference(cube, make_cuboid());
    REQUIRE(d.faces.empty());
}

TEST_CASE("flush face-to-face contact stays watertight") {
    // b shares the x = +0.5 plane of a
    const Mesh a = make_cuboid();
    const Mesh b = make_box({1.0, 0, 0}, {1, 1, 1});
    const Mesh u = csg_union(a, b);
    require_printable(u, "flush union");
    REQUIRE_THAT(signed_volume(u), WithinAbs(2.0, 1e-9));
    const auto report = validate_printable(u);
    REQUIRE(report.component_count == 1);

    // difference across the shared plane removes nothing
    const Mesh d = csg_difference(a, b);
    require_printable(d, "flush difference");
    REQUIRE_THAT(signed_volume(d), WithinAbs(1.0, 1e-9));

    // intersection across the shared plane has zero volume
    const Mesh i = csg_intersection(a, b);
    const double vi = i.faces.empty() ? 0.0 : signed_volume(i);
    REQUIRE_THAT(vi, WithinAbs(0.0, 1e-9));
}

TEST_CASE("hollowing a cube yields a two-shell solid of the right volume") {
    const Mesh outer = make_cuboid();
    const Mesh inner = make_box({0, 0, 0}, {0.5, 0.5, 0.5});
    const Mesh hollow = csg_difference(outer, inner);
    const auto report = validate_printable(hollow);
    REQUIRE(report.watertight);
    REQUIRE(report.consistent_winding);
    REQUIRE(report.component_count == 2);
    REQUIRE_THAT(signed_volume(hollow), WithinAbs(1.0 - 0.125, 1e-9));
}

TEST_CASE("disjoint intersection is empty") {
    const Mesh a = make_box({-2, 0, 0}, {1, 1, 1});
    const Mesh b = make_box({2, 0, 0}, {1, 1, 1});
    const Mesh i = csg_intersection(a, b);
    REQUIRE(i.faces.empty());
}

TEST_CASE("ring solid from coaxial cylinders has genus one") {
    const Mesh outer = make_cylinder(24);
    Transform shrink;
    shrink.scale = {0.5, 1.2, 0.5};
    const Mesh inner = apply_transform(make_cylinder(24), shrink);
    const Mesh ring = csg_difference(outer, inner);
    require_printable(ring, "ring");
    REQUIRE(euler_genus(ring) == 1);
    // Euler characteristic zero, stated directly
    const auto edges = detail::edge_uses(ring).size();
    const int v = detail::referenced_vertex_count(ring);
    const int f = static_cast<int>(ring.faces.size());
    REQUIRE(v - static_cast<int>(edges) + f == 0);
}

TEST_CASE("csg operands must be watertight consistently wound solids") {
    Mesh open_box = make_cuboid();
    open_box.faces.pop_back();
    REQUIRE_THROWS_WITH(csg_union(open_box, make_cuboid()),
                        Catch::Matchers::ContainsSubstring("watertight"));
    REQUIRE_THROWS_AS(csg_difference(make_cuboid(), open_box), Error);
}

TEST_CASE("empty operands short-circuit") {
    const Mesh cube = make_cuboid();
    const Mesh u = csg_union(Mesh{}, cube);
    REQUIRE_THAT(signed_volume(u), WithinRel(1.0, 1e-12));
    REQUIRE(csg_union(cube, Mesh{}).faces.size() == 12);
    REQUIRE(csg_difference(cube, Mesh{}).faces.size() == 12);
    REQUIRE(csg_difference(Mesh{}, cube).faces.empty());
    REQUIRE(csg_intersection(cube, Mesh{}).faces.empty());
}

TEST_CASE("csg is exact on rotated operands too") {
    Transform t;
    t.rotation_degrees = {0, 45, 0};
    const Mesh a = apply_transform(make_cuboid(), t);
    const Mesh b = make_box({0, 0.25, 0}, {2, 0.5, 2});
    const Mesh i = csg_intersection(a, b);
    require_printable(i, "rotated intersection");
    // the clip box spans the diamond cross-section, keeping the cube's top half
    REQUIRE_THAT(signed_volume(i), WithinRel(0.5, 1e-6));
}
