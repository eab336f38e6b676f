#pragma once

#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "meshforge/csg.hpp"
#include "meshforge/error.hpp"
#include "meshforge/match.hpp"
#include "meshforge/mesh.hpp"
#include "meshforge/model_io.hpp"
#include "meshforge/primitives.hpp"

namespace meshforge {

// One construction step. A script is a straight-line program over named
// meshes: primitives define names, booleans combine them under a new name,
// resize verbs rebind in place, the rest are read-only queries/exports.
enum class SceneVerb {
    cube,
    sphere,
    cylinder,
    add,
    subtract,
    intersect,
    resize,
    resize_to,
    dimension,
    match,
    export_mesh,
};

struct SceneCommand {
    SceneVerb verb;
    int line = 0;
    std::string name;       // defined or referenced object
    std::string lhs, rhs;   // boolean operands
    Transform transform;    // primitive placement
    bool has_tess = false;
    int tess_a = 0, tess_b = 0;  // sphere: stacks sectors; cylinder: sectors
    Vec3 values{1, 1, 1};   // resize factors / resize_to targets
    std::string path;       // export destination (relative)
    size_t top_k = 5;       // match result count
};

struct SceneScript {
    std::vector<SceneCommand> commands;
    bool needs_database = false;
};

namespace scene_detail {

inline bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
        if (!ok) return false;
    }
    return true;
}

inline Error parse_error(int line, const std::string& what) {
    return Error("scene parse error at line " + std::to_string(line) + ": " + what);
}

inline double number_arg(const std::string& token, int line) {
    double v;
    if (!io_detail::parse_double(token, v)) {
        throw parse_error(line, "malformed number '" + token + "'");
    }
    return v;
}

inline int int_arg(const std::string& token, int line) {
    const double v = number_arg(token, line);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
        throw parse_error(line, "expected an integer, got '" + token + "'");
    }
    return i;
}

// pos/rot/scale/tess keyword groups after a primitive's name.
inline void parse_primitive_groups(SceneCommand& cmd, const std::vector<std::string>& tokens,
                                   size_t start, int line) {
    std::set<std::string> seen;
    size_t i = start;
    while (i < tokens.size()) {
        const std::string& key = tokens[i];
        if (!seen.insert(key).second) {
            throw parse_error(line, "duplicate '" + key + "' group");
        }
        if (key == "pos" || key == "rot" || key == "scale") {
            if (i + 3 >= tokens.size()) {
                throw parse_error(line, "'" + key + "' needs 3 values");
            }
            Vec3 v{number_arg(tokens[i + 1], line), number_arg(tokens[i + 2], line),
                   number_arg(tokens[i + 3], line)};
            if (key == "pos") cmd.transform.position = v;
            else if (key == "rot") cmd.transform.rotation_degrees = v;
            else cmd.transform.scale = v;
            i += 4;
        } else if (key == "tess") {
            const size_t want = cmd.verb == SceneVerb::sphere ? 2 : 1;
            if (cmd.verb == SceneVerb::cube) {
                throw parse_error(line, "cube takes no 'tess' group");
            }
            if (i + want >= tokens.size()) {
                throw parse_error(line, "'tess' needs " + std::to_string(want) +
                                            (want == 1 ? " value" : " values"));
            }
            cmd.has_tess = true;
            cmd.tess_a = int_arg(tokens[i + 1], line);
            if (want == 2) cmd.tess_b = int_arg(tokens[i + 2], line);
            i += want + 1;
        } else {
            throw parse_error(line, "unknown argument '" + key +
                                        "' (expected pos, rot, scale, or tess)");
        }
    }
}

}  // namespace scene_detail

inline SceneScript parse_scene(const std::string& text) {
    static const std::set<std::string> interactive_only = {"sync", "capture", "select", "print"};
    static const std::set<std::string> reserved = {
        "cube", "sphere",    "cylinder", "add",   "subtract", "intersect", "resize",
        "resize_to", "dimension", "match", "export", "pos",      "rot",       "scale",
        "tess",   "sync",      "capture",  "select", "print"};

    SceneScript script;
    std::set<std::string> defined;
    std::istringstream stream(text);
    std::string raw;
    int line_number = 0;

    auto require_defined = [&](const std::string& name, int line) {
        if (!defined.count(name)) {
            throw scene_detail::parse_error(line, "undefined name '" + name + "'");
        }
    };
    auto define = [&](const std::string& name, int line) {
        if (!scene_detail::valid_name(name) || reserved.count(name)) {
            throw scene_detail::parse_error(line, "invalid object name '" + name + "'");
        }
        if (!defined.insert(name).second) {
            throw scene_detail::parse_error(line, "'" + name + "' already defined");
        }
    };

    while (std::getline(stream, raw)) {
        line_number++;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const auto tokens = io_detail::split_ws(raw);
        if (tokens.empty()) continue;

        const std::string& verb = tokens[0];
        SceneCommand cmd;
        cmd.line = line_number;

        if (interactive_only.count(verb)) {
            throw scene_detail::parse_error(
                line_number, "'" + verb + "' is an interactive-only command with no meaning here");
        }

        if (verb == "cube" || verb == "sphere" || verb == "cylinder") {
            cmd.verb = verb == "cube" ? SceneVerb::cube
                       : verb == "sphere" ? SceneVerb::sphere
                                          : SceneVerb::cylinder;
            if (tokens.size() < 2) {
                throw scene_detail::parse_error(line_number, "'" + verb + "' needs a name");
            }
            cmd.name = tokens[1];
            scene_detail::parse_primitive_groups(cmd, tokens, 2, line_number);
            define(cmd.name, line_number);
        } else if (verb == "add" || verb == "subtract" || verb == "intersect") {
            cmd.verb = verb == "add" ? SceneVerb::add
                       : verb == "subtract" ? SceneVerb::subtract
                                            : SceneVerb::intersect;
            if (tokens.size() != 4) {
                throw scene_detail::parse_error(line_number,
                                                "'" + verb + "' needs: " + verb + " out a b");
            }
            cmd.name = tokens[1];
            cmd.lhs = tokens[2];
            cmd.rhs = tokens[3];
            require_defined(cmd.lhs, line_number);
            require_defined(cmd.rhs, line_number);
            define(cmd.name, line_number);
        } else if (verb == "resize" || verb == "resize_to") {
            cmd.verb = verb == "resize" ? SceneVerb::resize : SceneVerb::resize_to;
            if (tokens.size() != 5) {
                throw scene_detail::parse_error(
                    line_number, "'" + verb + "' needs: " + verb + " name x y z");
            }
            cmd.name = tokens[1];
            require_defined(cmd.name, line_number);
            cmd.values = {scene_detail::number_arg(tokens[2], line_number),
                          scene_detail::number_arg(tokens[3], line_number),
                          scene_detail::number_arg(tokens[4], line_number)};
        } else if (verb == "dimension") {
            cmd.verb = SceneVerb::dimension;
            if (tokens.size() != 2) {
                throw scene_detail::parse_error(line_number, "'dimension' needs: dimension name");
            }
            cmd.name = tokens[1];
            require_defined(cmd.name, line_number);
        } else if (verb == "match") {
            cmd.verb = SceneVerb::match;
            if (tokens.size() != 2 && tokens.size() != 3) {
                throw scene_detail::parse_error(line_number, "'match' needs: match name [k]");
            }
            cmd.name = tokens[1];
            require_defined(cmd.name, line_number);
            if (tokens.size() == 3) {
                const int k = scene_detail::int_arg(tokens[2], line_number);
                if (k < 1) throw scene_detail::parse_error(line_number, "match count must be >= 1");
                cmd.top_k = static_cast<size_t>(k);
            }
            script.needs_database = true;
        } else if (verb == "export") {
            cmd.verb = SceneVerb::export_mesh;
            if (tokens.size() != 3) {
                throw scene_detail::parse_error(line_number,
                                                "'export' needs: export name file");
            }
            cmd.name = tokens[1];
            cmd.path = tokens[2];
            require_defined(cmd.name, line_number);
        } else {
            throw scene_detail::parse_error(line_number, "unknown verb '" + verb + "'");
        }
        script.commands.push_back(std::move(cmd));
    }
    return script;
}

struct SceneReport {
    std::vector<std::string> lines;  // dimension readouts and match rankings, in order
    std::vector<std::filesystem::path> exported_files;
    std::map<std::string, Mesh> objects;
    std::optional<Mesh> final_mesh;  // object of the last export
    std::string final_name;
};

// Runs the script. Exports land under out_dir; db backs any match commands.
// Module errors are re-raised with the failing command's line number.
inline SceneReport execute_scene(const SceneScript& script,
                                 const std::filesystem::path& out_dir = ".",
                                 const ModelDatabase* db = nullptr) {
    if (script.needs_database && !db) {
        throw Error("script uses 'match' but no model database was provided");
    }
    SceneReport report;
    auto& objects = report.objects;
    auto lookup = [&](const std::string& name) -> Mesh& {
        auto it = objects.find(name);
        if (it == objects.end()) throw Error("undefined name '" + name + "'");
        return it->second;
    };

    for (const auto& cmd : script.commands) {
        try {
            switch (cmd.verb) {
                case SceneVerb::cube:
                    objects[cmd.name] = apply_transform(make_cuboid(), cmd.transform);
                    break;
                case SceneVerb::sphere: {
                    PrimitiveSpec spec = PrimitiveSpec::sphere();
                    if (cmd.has_tess) {
                        spec.stacks = cmd.tess_a;
                        spec.sectors = cmd.tess_b;
                    }
                    objects[cmd.name] = apply_transform(make_primitive(spec), cmd.transform);
                    break;
                }
                case SceneVerb::cylinder: {
                    PrimitiveSpec spec = PrimitiveSpec::cylinder();
                    if (cmd.has_tess) spec.sectors = cmd.tess_a;
                    objects[cmd.name] = apply_transform(make_primitive(spec), cmd.transform);
                    break;
                }
                case SceneVerb::add:
                    objects[cmd.name] = csg_union(lookup(cmd.lhs), lookup(cmd.rhs));
                    break;
                case SceneVerb::subtract:
                    objects[cmd.name] = csg_difference(lookup(cmd.lhs), lookup(cmd.rhs));
                    break;
                case SceneVerb::intersect:
                    objects[cmd.name] = csg_intersection(lookup(cmd.lhs), lookup(cmd.rhs));
                    break;
                case SceneVerb::resize:
                    lookup(cmd.name) = resize(lookup(cmd.name), cmd.values);
                    break;
                case SceneVerb::resize_to:
                    lookup(cmd.name) = resize_to(lookup(cmd.name), cmd.values);
                    break;
                case SceneVerb::dimension: {
                    const Vec3 d = bounding_dimensions(lookup(cmd.name));
                    char buf[160];
                    std::snprintf(buf, sizeof(buf), "%s: %.6f %.6f %.6f", cmd.name.c_str(), d.x,
                                  d.y, d.z);
                    report.lines.push_back(buf);
                    break;
                }
                case SceneVerb::match: {
                    const auto results = best_match(lookup(cmd.name), *db, cmd.top_k);
                    for (size_t r = 0; r < results.size(); ++r) {
                        char buf[256];
                        std::snprintf(buf, sizeof(buf), "%zu\t%s\t%.6f", r + 1,
                                      results[r].model_id.c_str(), results[r].score);
                        report.lines.push_back(buf);
                    }
                    break;
                }
                case SceneVerb::export_mesh: {
                    const auto dest = out_dir / cmd.path;
                    if (dest.has_parent_path()) {
                        std::error_code ec;
                        std::filesystem::create_directories(dest.parent_path(), ec);
                    }
                    const Mesh& mesh = lookup(cmd.name);
                    save_mesh(dest, mesh);
                    report.exported_files.push_back(dest);
                    report.final_mesh = mesh;
                    report.final_name = cmd.name;
                    break;
                }
            }
        } catch (const Error& e) {
            throw Error("line " + std::to_string(cmd.line) + ": " + e.what());
        }
    }
    return report;
}

}  // namespace meshforge
