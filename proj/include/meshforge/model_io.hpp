#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "meshforge/error.hpp"
#include "meshforge/mesh.hpp"

namespace meshforge {

namespace io_detail {

// Shortest-ish stable decimal: 9 significant digits keeps goldens
// byte-stable without losing 32-bit-scale precision.
inline std::string format_g9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline bool parse_double(const std::string& token, double& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + token.size() && token.size() > 0;
}

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) tokens.push_back(tok);
    return tokens;
}

inline void write_le32(std::string& out, uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

inline void write_le16(std::string& out, uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

inline void write_f32(std::string& out, double v) {
    float f = static_cast<float>(v);
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    write_le32(out, bits);
}

inline uint32_t read_le32(std::string_view data, size_t offset) {
    return static_cast<uint32_t>(static_cast<unsigned char>(data[offset])) |
           (static_cast<uint32_t>(static_cast<unsigned char>(data[offset + 1])) << 8) |
           (static_cast<uint32_t>(static_cast<unsigned char>(data[offset + 2])) << 16) |
           (static_cast<uint32_t>(static_cast<unsigned char>(data[offset + 3])) << 24);
}

inline double read_f32(std::string_view data, size_t offset) {
    const uint32_t bits = read_le32(data, offset);
    float f;
    std::memcpy(&f, &bits, 4);
    return static_cast<double>(f);
}

}  // namespace io_detail

// Parsed OBJ with the bits the mesh pipeline ignores accounted for.
struct ObjDocument {
    Mesh mesh;
    std::map<std::string, int> ignored_directives;  // directive -> occurrence count
};

// Geometry-only OBJ reader: v and f are honored, everything else is
// ignored but logged. Polygonal faces are fan-triangulated (v0, vi, vi+1);
// 1-based and negative (relative) indices are both accepted.
inline ObjDocument parse_obj_document(const std::string& text) {
    ObjDocument doc;
    std::istringstream stream(text);
    std::string line;
    int line_number = 0;
    while (std::getline(stream, line)) {
        line_number++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto tokens = io_detail::split_ws(line);
        if (tokens.empty()) continue;
        const std::string& directive = tokens[0];
        if (directive == "v") {
            if (tokens.size() < 4) {
                throw Error("obj parse error at line " + std::to_string(line_number) +
                            ": vertex needs 3 coordinates");
            }
            Vec3 p;
            double* coords[3] = {&p.x, &p.y, &p.z};
            for (int k = 0; k < 3; ++k) {
                if (!io_detail::parse_double(tokens[1 + k], *coords[k])) {
                    throw Error("obj parse error at line " + std::to_string(line_number) +
                                ": malformed number '" + tokens[1 + k] + "'");
                }
            }
            doc.mesh.vertices.push_back(p);
        } else if (directive == "f") {
            if (tokens.size() < 4) {
                throw Error("obj parse error at line " + std::to_string(line_number) +
                            ": face needs at least 3 indices");
            }
            std::vector<int> indices;
            for (size_t k = 1; k < tokens.size(); ++k) {
                // "i", "i/t", "i//n", "i/t/n": the vertex index is the first field
                const std::string field = tokens[k].substr(0, tokens[k].find('/'));
                long idx = 0;
                const char* begin = field.c_str();
                char* end = nullptr;
                idx = std::strtol(begin, &end, 10);
                if (end != begin + field.size() || field.empty()) {
                    throw Error("obj parse error at line " + std::to_string(line_number) +
                                ": malformed face index '" + tokens[k] + "'");
                }
                const long nv = static_cast<long>(doc.mesh.vertices.size());
                long resolved = idx > 0 ? idx - 1 : nv + idx;  // negative = relative to current count
                if (idx == 0 || resolved < 0 || resolved >= nv) {
                    throw Error("obj parse error at line " + std::to_string(line_number) +
                                ": face index " + std::to_string(idx) + " out of range (have " +
                                std::to_string(nv) + " vertices)");
                }
                indices.push_back(static_cast<int>(resolved));
            }
            for (size_t k = 1; k + 1 < indices.size(); ++k) {
                doc.mesh.faces.push_back({indices[0], indices[k], indices[k + 1]});
            }
        } else {
            doc.ignored_directives[directive]++;
        }
    }
    check_mesh(doc.mesh);
    return doc;
}

inline Mesh parse_obj(const std::string& text) { return parse_obj_document(text).mesh; }

// One "v x y z" per vertex at 9 significant digits, one "f a b c" per face
// (1-based). Byte-deterministic for identical input.
inline std::string write_obj(const Mesh& mesh) {
    check_mesh(mesh);
    std::string out = "# meshforge OBJ: " + std::to_string(mesh.vertices.size()) + " vertices, " +
                      std::to_string(mesh.faces.size()) + " faces\n";
    for (const Vec3& v : mesh.vertices) {
        out += "v " + io_detail::format_g9(v.x) + " " + io_detail::format_g9(v.y) + " " +
               io_detail::format_g9(v.z) + "\n";
    }
    for (const auto& f : mesh.faces) {
        out += "f " + std::to_string(f[0] + 1) + " " + std::to_string(f[1] + 1) + " " +
               std::to_string(f[2] + 1) + "\n";
    }
    return out;
}

enum class StlMode { binary, ascii };

// Binary: 80-byte header, uint32 triangle count, 50-byte little-endian
// records with the attribute count fixed to 0. Normals are recomputed from
// winding in both modes.
inline std::string write_stl(const Mesh& mesh, StlMode mode = StlMode::binary) {
    check_mesh(mesh);
    auto face_normal = [&](const std::array<int, 3>& f) {
        return normalized(cross(mesh.vertices[f[1]] - mesh.vertices[f[0]],
                                mesh.vertices[f[2]] - mesh.vertices[f[0]]));
    };
    if (mode == StlMode::ascii) {
        std::string out = "solid meshforge\n";
        for (const auto& f : mesh.faces) {
            const Vec3 n = face_normal(f);
            out += "  facet normal " + io_detail::format_g9(n.x) + " " + io_detail::format_g9(n.y) +
                   " " + io_detail::format_g9(n.z) + "\n";
            out += "    outer loop\n";
            for (int k = 0; k < 3; ++k) {
                const Vec3& v = mesh.vertices[f[k]];
                out += "      vertex " + io_detail::format_g9(v.x) + " " +
                       io_detail::format_g9(v.y) + " " + io_detail::format_g9(v.z) + "\n";
            }
            out += "    endloop\n";
            out += "  endfacet\n";
        }
        out += "endsolid meshforge\n";
        return out;
    }
    std::string out(80, '\0');
    const char header[] = "meshforge binary STL";
    std::memcpy(out.data(), header, sizeof(header) - 1);
    io_detail::write_le32(out, static_cast<uint32_t>(mesh.faces.size()));
    for (const auto& f : mesh.faces) {
        const Vec3 n = face_normal(f);
        io_detail::write_f32(out, n.x);
        io_detail::write_f32(out, n.y);
        io_detail::write_f32(out, n.z);
        for (int k = 0; k < 3; ++k) {
            const Vec3& v = mesh.vertices[f[k]];
            io_detail::write_f32(out, v.x);
            io_detail::write_f32(out, v.y);
            io_detail::write_f32(out, v.z);
        }
        io_detail::write_le16(out, 0);
    }
    return out;
}

namespace io_detail {

inline Mesh parse_stl_ascii(const std::string& text) {
    Mesh mesh;
    std::istringstream stream(text);
    std::string line;
    int line_number = 0;
    int loop_vertices = -1;  // -1: outside a loop
    bool in_solid = false;
    while (std::getline(stream, line)) {
        line_number++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        const std::string& word = tokens[0];
        if (word == "solid") {
            in_solid = true;
        } else if (word == "facet" || word == "endfacet") {
            // normal is ignored; it gets recomputed from winding
        } else if (word == "outer") {
            loop_vertices = 0;
        } else if (word == "vertex") {
            if (loop_vertices < 0) {
                throw Error("stl parse error at line " + std::to_string(line_number) +
                            ": vertex outside of loop");
            }
            if (tokens.size() < 4) {
                throw Error("stl parse error at line " + std::to_string(line_number) +
                            ": vertex needs 3 coordinates");
            }
            Vec3 p;
            double* coords[3] = {&p.x, &p.y, &p.z};
            for (int k = 0; k < 3; ++k) {
                if (!parse_double(tokens[1 + k], *coords[k])) {
                    throw Error("stl parse error at line " + std::to_string(line_number) +
                                ": malformed number '" + tokens[1 + k] + "'");
                }
            }
            mesh.vertices.push_back(p);
            loop_vertices++;
        } else if (word == "endloop") {
            if (loop_vertices != 3) {
                throw Error("stl parse error at line " + std::to_string(line_number) +
                            ": loop has " + std::to_string(loop_vertices < 0 ? 0 : loop_vertices) +
                            " vertices, triangles need exactly 3");
            }
            const int base = mesh.vertex_count() - 3;
            mesh.faces.push_back({base, base + 1, base + 2});
            loop_vertices = -1;
        } else if (word == "endsolid") {
            in_solid = false;
        } else {
            throw Error("stl parse error at line " + std::to_string(line_number) +
                        ": unexpected token '" + word + "'");
        }
    }
    if (in_solid) throw Error("stl parse error: missing endsolid");
    return mesh;
}

}  // namespace io_detail

// STL reader, binary or ASCII (detected). The result is a triangle soup
// with per-face duplicated vertices; weld(mesh, 1e-7) recovers shared
// topology.
inline Mesh parse_stl(std::string_view bytes) {
    // Unambiguous binary files satisfy size == 84 + 50 * count.
    if (bytes.size() >= 84) {
        const uint32_t count = io_detail::read_le32(bytes, 80);
        if (bytes.size() == 84 + static_cast<size_t>(count) * 50) {
            Mesh mesh;
            mesh.vertices.reserve(count * 3);
            mesh.faces.reserve(count);
            size_t offset = 84;
            for (uint32_t i = 0; i < count; ++i) {
                offset += 12;  // stored normal skipped
                const int base = mesh.vertex_count();
                for (int k = 0; k < 3; ++k) {
                    mesh.vertices.push_back({io_detail::read_f32(bytes, offset),
                                             io_detail::read_f32(bytes, offset + 4),
                                             io_detail::read_f32(bytes, offset + 8)});
                    offset += 12;
                }
                mesh.faces.push_back({base, base + 1, base + 2});
                offset += 2;  // attribute byte count
            }
            return mesh;
        }
    }
    const size_t first = bytes.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && bytes.substr(first, 5) == "solid") {
        return io_detail::parse_stl_ascii(std::string(bytes));
    }
    if (bytes.size() < 84) {
        throw Error("stl parse error at byte " + std::to_string(bytes.size()) +
                    ": binary STL needs an 80-byte header and a 4-byte triangle count");
    }
    const uint32_t count = io_detail::read_le32(bytes, 80);
    throw Error("stl parse error at byte " + std::to_string(bytes.size()) +
                ": truncated binary payload, " + std::to_string(count) + " triangles need " +
                std::to_string(84 + static_cast<uint64_t>(count) * 50) + " bytes");
}

// --- file-level helpers (format by extension) ---

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error("write failed: " + path.string());
}

inline Mesh load_mesh(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    const std::string data = read_file(path);
    if (ext == ".obj") return parse_obj(data);
    if (ext == ".stl") return parse_stl(data);
    throw Error("unsupported mesh format '" + ext + "' (expected .obj or .stl): " + path.string());
}

inline void save_mesh(const std::filesystem::path& path, const Mesh& mesh) {
    const std::string ext = path.extension().string();
    if (ext == ".obj") {
        write_file(path, write_obj(mesh));
    } else if (ext == ".stl") {
        write_file(path, write_stl(mesh, StlMode::binary));
    } else {
        throw Error("unsupported mesh format '" + ext + "' (expected .obj or .stl): " +
                    path.string());
    }
}

}  // namespace meshforge
