#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "meshforge/error.hpp"
#include "meshforge/mesh.hpp"
#include "meshforge/model_io.hpp"
#include "meshforge/voxel.hpp"

namespace meshforge {

struct ModelEntry {
    std::string model_id;
    std::string display_name;
    std::filesystem::path mesh_path;
    VoxelGrid grid;
};

struct MatchResult {
    std::string model_id;
    std::string display_name;
    double score = 0.0;
};

namespace match_detail {

inline uint64_t fnv1a64(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string cache_key(const std::string& mesh_bytes, int resolution) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx-r%d",
                  static_cast<unsigned long long>(fnv1a64(mesh_bytes)), resolution);
    return buf;
}

}  // namespace match_detail

// Retrieval database: shapes voxelized once in the canonical frame, with a
// content-addressed cache so reloading a manifest does not re-voxelize
// unchanged meshes.
class ModelDatabase {
public:
    // Manifest is JSON: {"resolution": 32, "models": [{"model_id": ...,
    // "file": ..., "display_name": ...}, ...]}. Mesh paths are relative to
    // the manifest. The voxel cache lives in voxcache/ beside it.
    static ModelDatabase load(const std::filesystem::path& manifest_path) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(read_file(manifest_path));
        } catch (const nlohmann::json::parse_error& e) {
            throw Error("model database " + manifest_path.string() + ": " + e.what());
        }
        if (!doc.is_object() || !doc.contains("models") || !doc["models"].is_array()) {
            throw Error("model database " + manifest_path.string() +
                        ": expected an object with a 'models' array");
        }
        ModelDatabase db;
        db.resolution_ = doc.value("resolution", 32);
        if (db.resolution_ < 4) {
            throw Error("model database " + manifest_path.string() +
                        ": resolution must be >= 4");
        }
        const auto base_dir = manifest_path.has_parent_path()
                                  ? manifest_path.parent_path()
                                  : std::filesystem::path(".");
        const auto cache_dir = base_dir / "voxcache";
        for (const auto& item : doc["models"]) {
            if (!item.is_object() || !item.contains("model_id") || !item.contains("file")) {
                throw Error("model database " + manifest_path.string() +
                            ": every model needs 'model_id' and 'file'");
            }
            ModelEntry entry;
            entry.model_id = item["model_id"].get<std::string>();
            entry.display_name = item.value("display_name", entry.model_id);
            entry.mesh_path = base_dir / item["file"].get<std::string>();
            for (const auto& existing : db.entries_) {
                if (existing.model_id == entry.model_id) {
                    throw Error("model database " + manifest_path.string() +
                                ": duplicate model_id '" + entry.model_id + "'");
                }
            }
            const std::string mesh_bytes = read_file(entry.mesh_path);
            const auto cache_file =
                cache_dir / (match_detail::cache_key(mesh_bytes, db.resolution_) + ".vox");
            bool loaded = false;
            if (std::filesystem::exists(cache_file)) {
                try {
                    entry.grid = parse_voxel_grid(read_file(cache_file));
                    loaded = true;
                } catch (const Error&) {
                    loaded = false;  // stale or corrupt cache entry, rebuild
                }
            }
            if (!loaded) {
                Mesh mesh = load_mesh(entry.mesh_path);
                mesh = weld(mesh);
                entry.grid = voxelize_canonical(mesh, db.resolution_);
                std::error_code ec;
                std::filesystem::create_directories(cache_dir, ec);
                if (!ec) write_file(cache_file, write_voxel_grid(entry.grid));
            }
            db.entries_.push_back(std::move(entry));
        }
        return db;
    }

    int resolution() const { return resolution_; }
    const std::vector<ModelEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

private:
    int resolution_ = 32;
    std::vector<ModelEntry> entries_;
};

// Scores `query` against every database entry by canonical-frame IoU and
// returns the k best, sorted by descending score with model_id as the
// deterministic tiebreak.
inline std::vector<MatchResult> best_match(const Mesh& query, const ModelDatabase& db,
                                           size_t k = 5) {
    if (db.empty()) throw Error("empty model database: nothing to match against");
    const VoxelGrid query_grid = voxelize_canonical(query, db.resolution());
    std::vector<MatchResult> results;
    results.reserve(db.entries().size());
    for (const auto& entry : db.entries()) {
        results.push_back({entry.model_id, entry.display_name, iou(query_grid, entry.grid)});
    }
    std::sort(results.begin(), results.end(), [](const MatchResult& a, const MatchResult& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.model_id < b.model_id;
    });
    if (results.size() > k) results.resize(k);
    return results;
}

}  // namespace meshforge
