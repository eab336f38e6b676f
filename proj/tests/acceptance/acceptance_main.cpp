// Acceptance suite: every release criterion as one pass/fail line.
// Runs standalone (plain main) so the output reads as a checklist.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "meshforge/csg.hpp"
#include "meshforge/deform.hpp"
#include "meshforge/match.hpp"
#include "meshforge/mesh.hpp"
#include "meshforge/model_io.hpp"
#include "meshforge/primitives.hpp"
#include "meshforge/scene.hpp"
#include "meshforge/topology.hpp"
#include "meshforge/voxel.hpp"
#include "../support/oracles.hpp"

using namespace meshforge;
namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

void require_abs(double got, double want, double tol, const std::string& what) {
    if (!(std::fabs(got - want) <= tol)) {
        throw Failure(what + ": got " + std::to_string(got) + ", want " + std::to_string(want) +
                      " +/- " + std::to_string(tol));
    }
}

void require_rel(double got, double want, double tol, const std::string& what) {
    const double scale = std::fabs(want);
    if (!(std::fabs(got - want) <= tol * scale)) {
        throw Failure(what + ": got " + std::to_string(got) + ", want " + std::to_string(want) +
                      " rel " + std::to_string(tol));
    }
}

fs::path out_root() {
    const fs::path dir = fs::temp_directory_path() / "meshforge_acceptance";
    fs::create_directories(dir);
    return dir;
}

Mesh chair_mesh() {
    Mesh folded;
    for (const auto& t : oracles::chair_transforms()) {
        const Mesh placed = apply_transform(make_cuboid(), t);
        folded = folded.faces.empty() ? placed : csg_union(folded, placed);
    }
    return folded;
}

Mesh ring_mesh() {
    Transform shrink;
    shrink.scale = {0.5, 1.2, 0.5};
    return csg_difference(make_cylinder(32), apply_transform(make_cylinder(32), shrink));
}

double elapsed_seconds(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

// --- criterion bodies ---

void chair_reproduction() {
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = out_root() / "chair";
    fs::remove_all(dir);

    const SceneScript script =
        parse_scene(read_file(oracles::source_dir() / "scenes/chair.scene"));
    const SceneReport report = execute_scene(script, dir);
    require(report.final_mesh.has_value(), "scene exported nothing");
    const Mesh& chair = *report.final_mesh;

    const Vec3 dims = bounding_dimensions(chair);
    require_abs(dims.x, 0.120, 1e-6, "chair width");
    require_abs(dims.y, 0.163, 1e-6, "chair height");
    require_abs(dims.z, 0.100, 1e-6, "chair depth");

    const auto printability = validate_printable(chair);
    require(printability.watertight, "chair not watertight");
    require(printability.manifold, "chair not manifold");
    require(printability.consistent_winding, "chair winding inconsistent");

    const double analytic = signed_volume(chair);
    const double voxel = oracles::voxel_volume_oracle(chair, 128);
    require(std::fabs(analytic - voxel) / voxel <= 0.02,
            "volume " + std::to_string(analytic) + " vs 128-cell voxel estimate " +
                std::to_string(voxel) + " differ by more than 2%");

    const double secs = elapsed_seconds(start);
    require(secs < 10.0, "chair pipeline took " + std::to_string(secs) + " s (budget 10 s)");
}

void csg_algebra_suite() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240817);
    for (int trial = 0; trial < 200; ++trial) {
        const auto pair = oracles::random_box_pair(rng);
        const Mesh a = oracles::mesh_of(pair.a);
        const Mesh b = oracles::mesh_of(pair.b);
        const double va = oracles::box_volume(pair.a);
        const double vb = oracles::box_volume(pair.b);
        const double denom = va + vb;

        const Mesh u = csg_union(a, b);
        const Mesh i = csg_intersection(a, b);
        const Mesh d = csg_difference(a, b);
        const double vu = signed_volume(u);
        const double vi = i.faces.empty() ? 0.0 : signed_volume(i);
        const double vd = d.faces.empty() ? 0.0 : signed_volume(d);

        const std::string tag = "pair " + std::to_string(trial);
        require(std::fabs(vu + vi - denom) / denom <= 1e-6,
                tag + ": inclusion-exclusion off: " + std::to_string(vu + vi) + " vs " +
                    std::to_string(denom));
        require(std::fabs(vd + vi - va) / denom <= 1e-6,
                tag + ": difference identity off: " + std::to_string(vd + vi) + " vs " +
                    std::to_string(va));
        for (const Mesh* m : {&u, &i, &d}) {
            if (m->faces.empty()) continue;
            const auto rep = validate_printable(weld(*m));
            require(rep.watertight && rep.manifold && rep.consistent_winding,
                    tag + ": boolean output fails printability after weld");
        }
    }
    const double secs = elapsed_seconds(start);
    require(secs < 60.0, "csg suite took " + std::to_string(secs) + " s (budget 60 s)");
}

void analytic_goldens() {
    const Mesh cube = make_cuboid();
    const Mesh slot = oracles::make_box({0, 0, 0}, {0.5, 2.0, 0.5});
    require_abs(signed_volume(csg_difference(cube, slot)), 0.75, 1e-6, "slot difference");

    const Mesh offset = oracles::make_box({0.5, 0, 0}, {1, 1, 1});
    require_abs(signed_volume(csg_intersection(cube, offset)), 0.5, 1e-6, "offset intersection");

    const Mesh left = oracles::make_box({-1.5, 0, 0}, {1, 1, 1});
    const Mesh right = oracles::make_box({1.5, 0, 0}, {1, 1, 1});
    require_abs(signed_volume(csg_union(left, right)), 2.0, 1e-9, "disjoint union");
}

void iou_axioms() {
    const Mesh a_mesh = make_cuboid();
    const Mesh b_mesh = oracles::make_box({0.5, 0, 0}, {1, 1, 1});
    Aabb shared = bounding_box(a_mesh);
    shared.expand({1.0, 0.5, 0.5});
    const VoxelGrid a = voxelize_shared(a_mesh, 64, shared);
    const VoxelGrid b = voxelize_shared(b_mesh, 64, shared);

    require(iou(a, a) == 1.0, "self IoU is not exactly 1.0");
    require(iou(a, b) == iou(b, a), "IoU is not symmetric");
    require_abs(iou(a, b), 1.0 / 3.0, 0.02, "half-offset cube IoU at resolution 64");

    Aabb wide = shared;
    wide.expand({0, 0, 4.0});
    const VoxelGrid near = voxelize_shared(a_mesh, 16, wide);
    const VoxelGrid far =
        voxelize_shared(oracles::make_box({0.2, 0.2, 3.5}, {0.6, 0.6, 0.6}), 16, wide);
    require(iou(near, far) == 0.0, "disjoint IoU is not exactly 0.0");
}

std::string retrieval_report(const fs::path& dir) {
    const ModelDatabase db = ModelDatabase::load(dir / "manifest.json");
    std::ostringstream report;
    for (const auto& entry : db.entries()) {
        const Mesh query = weld(load_mesh(entry.mesh_path));
        const auto results = best_match(query, db, db.entries().size());
        require(!results.empty(), "no results for " + entry.model_id);
        require(results[0].model_id == entry.model_id,
                entry.model_id + " did not retrieve itself first (got " + results[0].model_id +
                    ")");
        require(results[0].score >= 0.999,
                entry.model_id + " self-score " + std::to_string(results[0].score) + " < 0.999");
        for (size_t i = 1; i < results.size(); ++i) {
            require(results[i - 1].score >= results[i].score,
                    "scores not sorted non-increasing for query " + entry.model_id);
        }
        for (size_t i = 0; i < results.size(); ++i) {
            char line[256];
            std::snprintf(line, sizeof(line), "%s\t%zu\t%s\t%.6f\n", entry.model_id.c_str(),
                          i + 1, results[i].model_id.c_str(), results[i].score);
            report << line;
        }
    }
    return report.str();
}

void retrieval_database() {
    const fs::path dir = out_root() / "retrieval_db";
    fs::remove_all(dir);
    fs::create_directories(dir);

    save_mesh(dir / "chair.obj", chair_mesh());
    save_mesh(dir / "box.obj", resize_to(make_cuboid(), {0.08, 0.04, 0.06}));
    save_mesh(dir / "sphere.obj", make_sphere(16, 24));
    save_mesh(dir / "cylinder.obj", make_cylinder(32));
    save_mesh(dir / "slab.obj", oracles::make_box({0, 0, 0}, {0.3, 0.02, 0.2}));
    save_mesh(dir / "ring.obj", ring_mesh());
    write_file(dir / "manifest.json", R"({
  "resolution": 32,
  "models": [
    {"model_id": "box", "file": "box.obj"},
    {"model_id": "chair", "file": "chair.obj"},
    {"model_id": "cylinder", "file": "cylinder.obj"},
    {"model_id": "ring", "file": "ring.obj"},
    {"model_id": "slab", "file": "slab.obj"},
    {"model_id": "sphere", "file": "sphere.obj"}
  ]
})");

    const std::string first = retrieval_report(dir);
    const std::string second = retrieval_report(dir);
    require(first == second, "two retrieval runs differ");
    write_file(dir / "report.tsv", first);
}

void topology_checks() {
    require(euler_genus(make_cuboid()) == 0, "cuboid genus");
    for (int stacks = 3; stacks <= 20; ++stacks) {
        for (int sectors = 3; sectors <= 24; sectors += 3) {
            const Mesh s = make_sphere(stacks, sectors);
            require(validate_printable(s).printable(),
                    "sphere " + std::to_string(stacks) + "x" + std::to_string(sectors) +
                        " not printable");
            require(euler_genus(s) == 0, "sphere genus not 0");
        }
    }
    for (int sectors : {3, 4, 5, 8, 16, 33, 64, 100}) {
        const Mesh c = make_cylinder(sectors);
        require(validate_printable(c).printable(),
                "cylinder " + std::to_string(sectors) + " not printable");
        require(euler_genus(c) == 0, "cylinder genus not 0");
    }

    const Mesh ring = ring_mesh();
    require(validate_printable(ring).printable(), "ring not printable");
    const int v = detail::referenced_vertex_count(ring);
    const int e = static_cast<int>(detail::edge_uses(ring).size());
    const int f = static_cast<int>(ring.faces.size());
    require(v - e + f == 0, "ring Euler characteristic is " + std::to_string(v - e + f));
    require(euler_genus(ring) == 1, "ring genus is not 1");

    Mesh two = make_cuboid();
    const Mesh other = oracles::make_box({3, 0, 0}, {1, 1, 1});
    const int base = static_cast<int>(two.vertices.size());
    two.vertices.insert(two.vertices.end(), other.vertices.begin(), other.vertices.end());
    for (const auto& face : other.faces) {
        two.faces.push_back({face[0] + base, face[1] + base, face[2] + base});
    }
    bool threw = false;
    try {
        euler_genus(two);
    } catch (const Error& e2) {
        threw = std::string(e2.what()).find("component") != std::string::npos;
    }
    require(threw, "two-component genus did not raise the documented error");
}

void constant_topology_deformation() {
    const Mesh tmpl = deformation_template();
    require(tmpl.vertices.size() == 642, "template vertex count");
    require(tmpl.faces.size() == 1280, "template face count");

    DisplacementField zero;
    zero.displacements.assign(tmpl.vertices.size(), Vec3{0, 0, 0});
    const Mesh same = apply_displacement(tmpl, zero);
    require(same.vertices.size() == tmpl.vertices.size(), "zero field changed vertex count");
    require(std::memcmp(same.vertices.data(), tmpl.vertices.data(),
                        tmpl.vertices.size() * sizeof(Vec3)) == 0,
            "zero field is not a bit-exact identity");
    require(same.faces == tmpl.faces, "zero field changed faces");

    std::mt19937_64 rng(20240819);
    std::uniform_real_distribution<double> mag(-0.01, 0.01);
    for (int trial = 0; trial < 100; ++trial) {
        DisplacementField field;
        field.displacements.reserve(tmpl.vertices.size());
        for (size_t i = 0; i < tmpl.vertices.size(); ++i) {
            field.displacements.push_back({mag(rng), mag(rng), mag(rng)});
        }
        const Mesh out = apply_displacement(tmpl, field);
        require(out.vertices.size() == tmpl.vertices.size(),
                "vertex count changed at trial " + std::to_string(trial));
        require(out.faces == tmpl.faces,
                "face list changed at trial " + std::to_string(trial));
    }
}

void io_round_trips() {
    std::vector<std::pair<std::string, Mesh>> corpus;
    corpus.emplace_back("cuboid", make_cuboid());
    corpus.emplace_back("sphere", make_sphere(16, 24));
    corpus.emplace_back("cylinder", make_cylinder(32));
    corpus.emplace_back("chair", chair_mesh());
    corpus.emplace_back("ring", ring_mesh());
    corpus.emplace_back("slab", oracles::make_box({0.4, -0.2, 1.0}, {0.3, 0.02, 0.2}));

    for (const auto& [name, mesh] : corpus) {
        const Mesh back = parse_obj(write_obj(mesh));
        require(back.faces == mesh.faces, name + ": obj faces changed");
        require(back.vertices.size() == mesh.vertices.size(), name + ": obj vertex count");
        for (size_t i = 0; i < mesh.vertices.size(); ++i) {
            const Vec3 d = back.vertices[i] - mesh.vertices[i];
            require(std::fabs(d.x) <= 1e-6 && std::fabs(d.y) <= 1e-6 && std::fabs(d.z) <= 1e-6,
                    name + ": obj vertex " + std::to_string(i) + " moved");
        }

        const Mesh stl_back = weld(parse_stl(write_stl(mesh, StlMode::binary)));
        require_rel(signed_volume(stl_back), signed_volume(mesh), 1e-6,
                    name + ": stl round-trip volume");
    }

    require(write_stl(make_cuboid(), StlMode::binary).size() == 684,
            "cuboid binary stl is not 684 bytes");
}

void resize_contract() {
    std::mt19937_64 rng(20240821);
    std::uniform_real_distribution<double> target(0.01, 10.0);
    const std::vector<Mesh> bases = {make_cuboid(), make_sphere(12, 16), make_cylinder(24),
                                     chair_mesh()};
    for (int trial = 0; trial < 1000; ++trial) {
        const Mesh& base = bases[trial % bases.size()];
        const Vec3 want{target(rng), target(rng), target(rng)};
        const Mesh out = resize_to(base, want);
        const Vec3 got = bounding_dimensions(out);
        require(std::fabs(got.x - want.x) <= 1e-9 * want.x &&
                    std::fabs(got.y - want.y) <= 1e-9 * want.y &&
                    std::fabs(got.z - want.z) <= 1e-9 * want.z,
                "trial " + std::to_string(trial) + ": dimensions missed");
        require(out.faces == base.faces, "trial " + std::to_string(trial) + ": topology changed");
    }
}

void determinism_and_budget(std::chrono::steady_clock::time_point suite_start) {
    const fs::path dir1 = out_root() / "rerun1";
    const fs::path dir2 = out_root() / "rerun2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    const SceneScript script =
        parse_scene(read_file(oracles::source_dir() / "scenes/chair.scene"));
    const SceneReport r1 = execute_scene(script, dir1);
    const SceneReport r2 = execute_scene(script, dir2);
    require(r1.lines == r2.lines, "scene reports differ between runs");
    require(read_file(dir1 / "chair.obj") == read_file(dir2 / "chair.obj"),
            "exported chair.obj differs between runs");

    const VoxelGrid g1 = voxelize_canonical(*r1.final_mesh, 32);
    const VoxelGrid g2 = voxelize_canonical(*r2.final_mesh, 32);
    require(write_voxel_grid(g1) == write_voxel_grid(g2), "voxel grids differ between runs");

    const fs::path db_dir = out_root() / "retrieval_db";
    require(fs::exists(db_dir / "report.tsv"), "retrieval report missing");
    require(retrieval_report(db_dir) == read_file(db_dir / "report.tsv"),
            "retrieval report differs on rerun");

    const double secs = elapsed_seconds(suite_start);
    require(secs < 300.0, "suite took " + std::to_string(secs) + " s (budget 300 s)");
}

}  // namespace

int main() {
    const auto suite_start = std::chrono::steady_clock::now();
    struct Criterion {
        int id;
        const char* label;
        std::function<void()> body;
    };
    const std::vector<Criterion> criteria = {
        {1, "chair scene: reference dimensions, printable, volume within 2% of voxel oracle",
         chair_reproduction},
        {2, "csg algebra: 200 seeded box pairs satisfy volume identities, outputs printable",
         csg_algebra_suite},
        {3, "analytic goldens: slot 0.75, offset intersection 0.5, disjoint union 2.0",
         analytic_goldens},
        {4, "iou axioms: self 1.0, disjoint 0.0, symmetric, half-offset 1/3 at res 64",
         iou_axioms},
        {5, "retrieval: 6-entry database self-retrieval at rank 1, sorted, reproducible",
         retrieval_database},
        {6, "topology: primitives genus 0, ring genus 1, two-component input rejected",
         topology_checks},
        {7, "deformation: 100 bounded fields keep the 642-vertex template topology",
         constant_topology_deformation},
        {8, "i/o: obj and stl round trips, cuboid binary stl exactly 684 bytes",
         io_round_trips},
        {9, "resize: 1000 random targets hit within 1e-9 relative", resize_contract},
        {10, "determinism: byte-identical artifacts on rerun, suite within budget",
         [&] { determinism_and_budget(suite_start); }},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string verdict = "PASS";
        std::string detail;
        try {
            criterion.body();
        } catch (const std::exception& e) {
            verdict = "FAIL";
            detail = e.what();
            failures++;
        }
        std::printf("%s  criterion %2d: %s (%.2f s)\n", verdict.c_str(), criterion.id,
                    criterion.label, elapsed_seconds(start));
        if (!detail.empty()) std::printf("      %s\n", detail.c_str());
    }
    std::printf("%d/%zu criteria passed (total %.2f s)\n",
                static_cast<int>(criteria.size()) - failures, criteria.size(),
                elapsed_seconds(suite_start));
    return failures == 0 ? 0 : 1;
}
