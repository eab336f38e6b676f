#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "meshforge/error.hpp"
#include "meshforge/mesh.hpp"
#include "meshforge/model_io.hpp"
#include "meshforge/topology.hpp"

namespace meshforge {

// Axis-aligned occupancy grid. Cells are cubes of side cell_size; cell
// (x, y, z) spans origin + cell_size * [x, x+1) x [y, y+1) x [z, z+1).
struct VoxelGrid {
    Vec3 origin{0, 0, 0};
    double cell_size = 1.0;
    int nx = 0, ny = 0, nz = 0;
    std::vector<uint8_t> occupancy;  // nx*ny*nz entries, 0 or 1

    size_t index(int x, int y, int z) const {
        return static_cast<size_t>(x) +
               static_cast<size_t>(nx) * (static_cast<size_t>(y) + static_cast<size_t>(ny) * z);
    }
    bool at(int x, int y, int z) const { return occupancy[index(x, y, z)] != 0; }
    size_t cell_count() const { return occupancy.size(); }
    size_t occupied_count() const {
        size_t n = 0;
        for (uint8_t b : occupancy) n += b;
        return n;
    }
    double occupied_volume() const {
        return static_cast<double>(occupied_count()) * cell_size * cell_size * cell_size;
    }
    bool same_frame(const VoxelGrid& o) const {
        return nx == o.nx && ny == o.ny && nz == o.nz && origin == o.origin &&
               cell_size == o.cell_size;
    }
};

namespace voxel_detail {

// Inside/outside classification for one grid column: crossings of the +x
// ray at (y, z) against the mesh, by parity. Degenerate hits (ray through
// an edge or vertex, or grazing a face) are escaped by jittering the
// column; watertight input makes the jittered parity well-defined.
struct ColumnClassifier {
    const Mesh& mesh;

    explicit ColumnClassifier(const Mesh& m) : mesh(m) {}

    // Returns sorted x positions where the column line enters/exits the
    // solid. Throws if the column stays degenerate after all retries.
    std::vector<double> crossings(double y, double z, double jitter_scale) const {
        std::vector<double> xs;
        for (int attempt = 0; attempt < 16; ++attempt) {
            const double j = attempt == 0 ? 0.0 : jitter_scale * (1 << (attempt - 1));
            if (collect(y + j, z + 1.37 * j, xs) && xs.size() % 2 == 0) {
                return xs;
            }
        }
        throw Error("voxelization failed: ray through (" + std::to_string(y) + ", " +
                    std::to_string(z) + ") remains degenerate after jitter");
    }

private:
    bool collect(double y, double z, std::vector<double>& xs) const {
        xs.clear();
        for (const auto& f : mesh.faces) {
            const Vec3& a = mesh.vertices[f[0]];
            const Vec3& b = mesh.vertices[f[1]];
            const Vec3& c = mesh.vertices[f[2]];
            const double byz = (b.y - a.y) * (c.z - a.z) - (b.z - a.z) * (c.y - a.y);
            const double scale = std::fabs((b.y - a.y) * (c.z - a.z)) +
                                 std::fabs((b.z - a.z) * (c.y - a.y)) + 1e-300;
            if (std::fabs(byz) < 1e-12 * scale) continue;  // parallel to the ray
            const double u = ((c.z - a.z) * (y - a.y) - (c.y - a.y) * (z - a.z)) / byz;
            const double v = (-(b.z - a.z) * (y - a.y) + (b.y - a.y) * (z - a.z)) / byz;
            const double w = 1.0 - u - v;
            const double eps = 1e-10;
            if (u <= -eps || v <= -eps || w <= -eps) continue;  // outside
            if (u < eps || v < eps || w < eps) return false;    // edge graze: jitter
            xs.push_back(a.x + u * (b.x - a.x) + v * (c.x - a.x));
        }
        std::sort(xs.begin(), xs.end());
        return true;
    }
};

inline int cells_for(double extent, double cell) {
    const int n = static_cast<int>(std::ceil(extent / cell - 1e-9));
    return std::max(1, n);
}

}  // namespace voxel_detail

enum class VoxelFrame { canonical, shared };

namespace voxel_detail {

inline VoxelGrid voxelize_in_grid(const Mesh& mesh, const VoxelGrid& empty_grid) {
    VoxelGrid grid = empty_grid;
    grid.occupancy.assign(static_cast<size_t>(grid.nx) * grid.ny * grid.nz, 0);
    const ColumnClassifier classifier(mesh);
    const double jitter = 1e-9 * std::max(1.0, grid.cell_size * std::max({grid.nx, grid.ny, grid.nz}));
    for (int z = 0; z < grid.nz; ++z) {
        for (int y = 0; y < grid.ny; ++y) {
            const double cy = grid.origin.y + (y + 0.5) * grid.cell_size;
            const double cz = grid.origin.z + (z + 0.5) * grid.cell_size;
            const auto xs = classifier.crossings(cy, cz, jitter);
            if (xs.empty()) continue;
            // walk inside intervals [xs[0], xs[1]], [xs[2], xs[3]], ...
            for (size_t i = 0; i + 1 < xs.size(); i += 2) {
                const double lo = xs[i];
                const double hi = xs[i + 1];
                int first = static_cast<int>(std::ceil((lo - grid.origin.x) / grid.cell_size - 0.5));
                int last = static_cast<int>(std::floor((hi - grid.origin.x) / grid.cell_size - 0.5));
                first = std::max(first, 0);
                last = std::min(last, grid.nx - 1);
                for (int x = first; x <= last; ++x) grid.occupancy[grid.index(x, y, z)] = 1;
            }
        }
    }
    return grid;
}

}  // namespace voxel_detail

// Classifies cell centers of a shared-frame grid over `box` by ray parity.
// The grid uses cubic cells of side longest_side(box)/resolution.
inline VoxelGrid voxelize_shared(const Mesh& mesh, int resolution, const Aabb& box) {
    if (resolution < 4) throw Error("invalid voxelization resolution: need >= 4");
    if (mesh.vertices.empty()) throw Error("empty mesh: cannot voxelize");
    {
        const auto edges = detail::edge_uses(mesh);
        for (const auto& [key, use] : edges) {
            if (use.faces != 2) throw Error("invalid operand: voxelization needs a watertight mesh");
        }
    }
    VoxelGrid grid;
    grid.origin = box.min;
    grid.cell_size = box.longest_side() / resolution;
    if (!(grid.cell_size > 0.0)) throw Error("invalid shared frame: empty bounding box");
    grid.nx = voxel_detail::cells_for(box.extent().x, grid.cell_size);
    grid.ny = voxel_detail::cells_for(box.extent().y, grid.cell_size);
    grid.nz = voxel_detail::cells_for(box.extent().z, grid.cell_size);
    return voxel_detail::voxelize_in_grid(mesh, grid);
}

// Scale-and-center normalization: the mesh is uniformly scaled and centered
// so its longest AABB side spans 92% of an N^3 grid cube; the grid frame is
// abstract (origin 0, cell 1), which makes canonical grids of different
// meshes directly comparable.
inline VoxelGrid voxelize_canonical(const Mesh& mesh, int resolution) {
    if (resolution < 4) throw Error("invalid voxelization resolution: need >= 4");
    if (mesh.vertices.empty()) throw Error("empty mesh: cannot voxelize");
    {
        const auto edges = detail::edge_uses(mesh);
        for (const auto& [key, use] : edges) {
            if (use.faces != 2) throw Error("invalid operand: voxelization needs a watertight mesh");
        }
    }
    const Aabb box = bounding_box(mesh);
    const double longest = box.longest_side();
    if (!(longest > 0.0)) throw Error("invalid mesh: degenerate bounding box");
    const double scale = 0.92 * resolution / longest;
    const Vec3 center = box.center();
    const Vec3 grid_center{resolution / 2.0, resolution / 2.0, resolution / 2.0};
    Mesh normalized;
    normalized.faces = mesh.faces;
    normalized.vertices.reserve(mesh.vertices.size());
    for (const Vec3& v : mesh.vertices) {
        normalized.vertices.push_back((v - center) * scale + grid_center);
    }
    VoxelGrid grid;
    grid.origin = {0, 0, 0};
    grid.cell_size = 1.0;
    grid.nx = grid.ny = grid.nz = resolution;
    return voxel_detail::voxelize_in_grid(normalized, grid);
}

inline VoxelGrid voxelize(const Mesh& mesh, int resolution, VoxelFrame frame,
                          const Aabb* shared_box = nullptr) {
    if (frame == VoxelFrame::shared) {
        if (!shared_box) throw Error("shared-frame voxelization needs a bounding box");
        return voxelize_shared(mesh, resolution, *shared_box);
    }
    return voxelize_canonical(mesh, resolution);
}

// Intersection over union of two occupancy grids in the same frame.
// Both-empty compares as 1.0.
inline double iou(const VoxelGrid& a, const VoxelGrid& b) {
    if (!a.same_frame(b)) {
        throw Error("incompatible grids: dims, origin, and cell size must match");
    }
    size_t inter = 0, uni = 0;
    for (size_t i = 0; i < a.occupancy.size(); ++i) {
        const bool oa = a.occupancy[i] != 0;
        const bool ob = b.occupancy[i] != 0;
        inter += (oa && ob) ? 1 : 0;
        uni += (oa || ob) ? 1 : 0;
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

// --- .vox text format: header plus hex-packed occupancy, diffable ---

namespace voxel_detail {

inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace voxel_detail

inline std::string write_voxel_grid(const VoxelGrid& grid) {
    std::string out = "MESHVOX 1\n";
    out += "dims " + std::to_string(grid.nx) + " " + std::to_string(grid.ny) + " " +
           std::to_string(grid.nz) + "\n";
    out += "origin " + voxel_detail::format_g17(grid.origin.x) + " " +
           voxel_detail::format_g17(grid.origin.y) + " " + voxel_detail::format_g17(grid.origin.z) +
           "\n";
    out += "cell " + voxel_detail::format_g17(grid.cell_size) + "\n";
    out += "data\n";
    static const char hex_digits[] = "0123456789abcdef";
    const size_t n = grid.occupancy.size();
    std::string row;
    for (size_t i = 0; i < n; i += 4) {
        int nibble = 0;
        for (size_t k = 0; k < 4 && i + k < n; ++k) {
            if (grid.occupancy[i + k]) nibble |= 1 << (3 - k);
        }
        row.push_back(hex_digits[nibble]);
        if (row.size() == 64) {
            out += row;
            out += "\n";
            row.clear();
        }
    }
    if (!row.empty()) {
        out += row;
        out += "\n";
    }
    return out;
}

inline VoxelGrid parse_voxel_grid(const std::string& text) {
    std::istringstream stream(text);
    std::string line;
    int line_number = 0;
    auto next_line = [&]() {
        while (std::getline(stream, line)) {
            line_number++;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    };
    if (!next_line() || line != "MESHVOX 1") {
        throw Error("vox parse error at line " + std::to_string(std::max(line_number, 1)) +
                    ": expected 'MESHVOX 1' header");
    }
    VoxelGrid grid;
    auto expect_fields = [&](const std::string& keyword, int count) {
        if (!next_line()) {
            throw Error("vox parse error: unexpected end of file, expected '" + keyword + "'");
        }
        auto tokens = io_detail::split_ws(line);
        if (tokens.empty() || tokens[0] != keyword ||
            static_cast<int>(tokens.size()) != count + 1) {
            throw Error("vox parse error at line " + std::to_string(line_number) + ": expected '" +
                        keyword + "' with " + std::to_string(count) + " values");
        }
        return tokens;
    };
    {
        auto tokens = expect_fields("dims", 3);
        grid.nx = std::stoi(tokens[1]);
        grid.ny = std::stoi(tokens[2]);
        grid.nz = std::stoi(tokens[3]);
        if (grid.nx < 1 || grid.ny < 1 || grid.nz < 1) {
            throw Error("vox parse error at line " + std::to_string(line_number) +
                        ": dims must be positive");
        }
    }
    {
        auto tokens = expect_fields("origin", 3);
        double* coords[3] = {&grid.origin.x, &grid.origin.y, &grid.origin.z};
        for (int k = 0; k < 3; ++k) {
            if (!io_detail::parse_double(tokens[1 + k], *coords[k])) {
                throw Error("vox parse error at line " + std::to_string(line_number) +
                            ": malformed number '" + tokens[1 + k] + "'");
            }
        }
    }
    {
        auto tokens = expect_fields("cell", 1);
        if (!io_detail::parse_double(tokens[1], grid.cell_size) || !(grid.cell_size > 0.0)) {
            throw Error("vox parse error at line " + std::to_string(line_number) +
                        ": cell size must be a positive number");
        }
    }
    if (!next_line() || line != "data") {
        throw Error("vox parse error at line " + std::to_string(line_number) +
                    ": expected 'data'");
    }
    const size_t n = static_cast<size_t>(grid.nx) * grid.ny * grid.nz;
    grid.occupancy.assign(n, 0);
    size_t bit = 0;
    while (bit < n) {
        if (!next_line()) {
            throw Error("vox parse error: occupancy data ends early (" + std::to_string(bit) +
                        " of " + std::to_string(n) + " cells)");
        }
        for (char ch : line) {
            int nibble;
            if (ch >= '0' && ch <= '9') nibble = ch - '0';
            else if (ch >= 'a' && ch <= 'f') nibble = ch - 'a' + 10;
            else if (ch >= 'A' && ch <= 'F') nibble = ch - 'A' + 10;
            else {
                throw Error("vox parse error at line " + std::to_string(line_number) +
                            ": invalid hex digit '" + std::string(1, ch) + "'");
            }
            for (int k = 0; k < 4 && bit < n; ++k, ++bit) {
                grid.occupancy[bit] = (nibble >> (3 - k)) & 1;
            }
        }
    }
    return grid;
}

}  // namespace meshforge
