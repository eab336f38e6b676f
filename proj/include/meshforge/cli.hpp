#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "meshforge/csg.hpp"
#include "meshforge/error.hpp"
#include "meshforge/match.hpp"
#include "meshforge/mesh.hpp"
#include "meshforge/model_io.hpp"
#include "meshforge/primitives.hpp"
#include "meshforge/scene.hpp"
#include "meshforge/topology.hpp"
#include "meshforge/voxel.hpp"

namespace meshforge {

namespace cli_detail {

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline std::optional<std::string> env_db() {
    if (const char* v = std::getenv("MESHFORGE_DB"); v && *v) return std::string(v);
    return std::nullopt;
}

inline void print_validation(std::ostream& out, const PrintabilityReport& report) {
    auto yn = [](bool b) { return b ? "true" : "false"; };
    out << "watertight: " << yn(report.watertight) << "\n";
    out << "manifold: " << yn(report.manifold) << "\n";
    out << "consistent_winding: " << yn(report.consistent_winding) << "\n";
    out << "components: " << report.component_count << "\n";
    if (report.genus.has_value()) {
        out << "genus: " << *report.genus << "\n";
    } else {
        out << "genus: undefined\n";
    }
    out << "printable: " << yn(report.printable()) << "\n";
}

inline void print_matches(std::ostream& out, const std::vector<MatchResult>& results) {
    for (size_t r = 0; r < results.size(); ++r) {
        out << (r + 1) << "\t" << results[r].model_id << "\t" << fixed6(results[r].score) << "\n";
    }
}

}  // namespace cli_detail

// Full pipeline behind one executable. Returns the process exit code:
// 0 success, 1 domain error (bad mesh, failed validation, unreadable
// file), 2 usage error. Informational output goes to `out`, errors to
// `err`. `args` excludes the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"meshforge: CSG construction, shape retrieval, and printability checks"};
    app.require_subcommand(1);

    // build
    auto* build = app.add_subcommand("build", "run a scene script and export its models");
    std::string build_script;
    std::string build_db;
    std::string build_out_dir = ".";
    build->add_option("script", build_script, "scene script file")->required();
    build->add_option("--db", build_db, "model database manifest (JSON)");
    build->add_option("--out", build_out_dir, "output directory for exports");

    // convert
    auto* convert = app.add_subcommand("convert", "convert between mesh formats by extension");
    std::string convert_in, convert_out;
    convert->add_option("input", convert_in, "input mesh (.obj or .stl)")->required();
    convert->add_option("output", convert_out, "output mesh (.obj or .stl)")->required();

    // dims
    auto* dims = app.add_subcommand("dims", "print bounding-box dimensions in meters");
    std::string dims_in;
    dims->add_option("mesh", dims_in, "mesh file")->required();

    // resize
    auto* resize_cmd = app.add_subcommand("resize", "scale a mesh to exact dimensions");
    std::string resize_in, resize_out;
    std::vector<double> resize_to_dims;
    resize_cmd->add_option("mesh", resize_in, "input mesh")->required();
    resize_cmd->add_option("--to", resize_to_dims, "target W H D in meters")
        ->expected(3)
        ->required();
    resize_cmd->add_option("output", resize_out, "output mesh")->required();

    // voxelize
    auto* voxelize_cmd = app.add_subcommand("voxelize", "rasterize a mesh to an occupancy grid");
    std::string voxelize_in, voxelize_out;
    int voxelize_res = 32;
    voxelize_cmd->add_option("mesh", voxelize_in, "input mesh")->required();
    voxelize_cmd->add_option("--res", voxelize_res, "grid resolution (default 32)");
    voxelize_cmd->add_option("output", voxelize_out, "output .vox grid")->required();

    // iou
    auto* iou_cmd = app.add_subcommand("iou", "intersection over union of two .vox grids");
    std::string iou_a, iou_b;
    iou_cmd->add_option("a", iou_a, "first grid")->required();
    iou_cmd->add_option("b", iou_b, "second grid")->required();

    // match
    auto* match_cmd = app.add_subcommand("match", "rank database models by shape similarity");
    std::string match_in, match_db;
    int match_top = 5;
    match_cmd->add_option("mesh", match_in, "query mesh")->required();
    match_cmd->add_option("--db", match_db, "model database manifest (JSON)");
    match_cmd->add_option("--top", match_top, "number of results (default 5)");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "report printability of a mesh");
    std::string validate_in;
    bool validate_raw = false;
    validate_cmd->add_option("mesh", validate_in, "mesh file")->required();
    validate_cmd->add_flag("--raw", validate_raw, "skip the vertex weld before checking");

    // primitive
    auto* primitive_cmd = app.add_subcommand("primitive", "emit a unit primitive mesh");
    std::string primitive_kind, primitive_out;
    std::vector<int> primitive_tess;
    primitive_cmd->add_option("kind", primitive_kind, "cube, sphere, or cylinder")->required();
    primitive_cmd
        ->add_option("--tess", primitive_tess,
                     "tessellation: sphere takes 'stacks sectors', cylinder takes 'sectors'")
        ->expected(1, 2);
    primitive_cmd->add_option("output", primitive_out, "output mesh")->required();

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << "meshforge 1.0.0\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        err << app.help();
        return 2;
    }

    try {
        if (*build) {
            const SceneScript script = parse_scene(read_file(build_script));
            std::optional<ModelDatabase> db;
            std::string db_path = build_db;
            if (db_path.empty() && script.needs_database) {
                db_path = cli_detail::env_db().value_or("");
            }
            if (!db_path.empty()) db = ModelDatabase::load(db_path);
            const SceneReport report =
                execute_scene(script, build_out_dir, db ? &*db : nullptr);
            for (const auto& line : report.lines) out << line << "\n";
            return 0;
        }
        if (*convert) {
            save_mesh(convert_out, load_mesh(convert_in));
            return 0;
        }
        if (*dims) {
            const Vec3 d = bounding_dimensions(load_mesh(dims_in));
            out << cli_detail::fixed6(d.x) << " " << cli_detail::fixed6(d.y) << " "
                << cli_detail::fixed6(d.z) << "\n";
            return 0;
        }
        if (*resize_cmd) {
            const Mesh mesh = load_mesh(resize_in);
            save_mesh(resize_out,
                      resize_to(mesh, {resize_to_dims[0], resize_to_dims[1], resize_to_dims[2]}));
            return 0;
        }
        if (*voxelize_cmd) {
            const Mesh mesh = weld(load_mesh(voxelize_in));
            write_file(voxelize_out, write_voxel_grid(voxelize_canonical(mesh, voxelize_res)));
            return 0;
        }
        if (*iou_cmd) {
            const VoxelGrid a = parse_voxel_grid(read_file(iou_a));
            const VoxelGrid b = parse_voxel_grid(read_file(iou_b));
            out << cli_detail::fixed6(iou(a, b)) << "\n";
            return 0;
        }
        if (*match_cmd) {
            std::string db_path = match_db;
            if (db_path.empty()) db_path = cli_detail::env_db().value_or("");
            if (db_path.empty()) {
                err << "usage error: 'match' needs --db or the MESHFORGE_DB environment "
                       "variable\n";
                return 2;
            }
            if (match_top < 1) {
                err << "usage error: --top must be >= 1\n";
                return 2;
            }
            const ModelDatabase db = ModelDatabase::load(db_path);
            const Mesh query = weld(load_mesh(match_in));
            cli_detail::print_matches(out, best_match(query, db, static_cast<size_t>(match_top)));
            return 0;
        }
        if (*validate_cmd) {
            Mesh mesh = load_mesh(validate_in);
            if (!validate_raw) mesh = weld(mesh);
            const PrintabilityReport report = validate_printable(mesh);
            cli_detail::print_validation(out, report);
            return report.printable() ? 0 : 1;
        }
        if (*primitive_cmd) {
            PrimitiveSpec spec;
            if (primitive_kind == "cube") {
                spec = PrimitiveSpec::cuboid();
                if (!primitive_tess.empty()) {
                    err << "usage error: cube takes no --tess\n";
                    return 2;
                }
            } else if (primitive_kind == "sphere") {
                spec = PrimitiveSpec::sphere();
                if (!primitive_tess.empty()) {
                    if (primitive_tess.size() != 2) {
                        err << "usage error: sphere --tess needs 'stacks sectors'\n";
                        return 2;
                    }
                    spec.stacks = primitive_tess[0];
                    spec.sectors = primitive_tess[1];
                }
            } else if (primitive_kind == "cylinder") {
                spec = PrimitiveSpec::cylinder();
                if (!primitive_tess.empty()) {
                    if (primitive_tess.size() != 1) {
                        err << "usage error: cylinder --tess needs 'sectors'\n";
                        return 2;
                    }
                    spec.sectors = primitive_tess[0];
                }
            } else {
                err << "usage error: unknown primitive '" << primitive_kind
                    << "' (expected cube, sphere, or cylinder)\n";
                return 2;
            }
            save_mesh(primitive_out, make_primitive(spec));
            return 0;
        }
        err << "usage error: no subcommand\n" << app.help();
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace meshforge
