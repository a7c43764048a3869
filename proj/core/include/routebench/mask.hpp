#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "routebench/common.hpp"
#include "routebench/kb.hpp"

#include <nlohmann/json_fwd.hpp>

namespace routebench::mask {

/// Row-major grid of land-cover class ids in [0,7].
struct SemanticMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> cells;

    std::uint8_t at(int row, int col) const { return cells[static_cast<std::size_t>(row) * width + col]; }
    std::uint8_t& at(int row, int col) { return cells[static_cast<std::size_t>(row) * width + col]; }
    std::uint8_t at(PixelCoord p) const { return at(p.row, p.col); }
    bool in_bounds(int row, int col) const {
        return row >= 0 && row < height && col >= 0 && col < width;
    }
    bool in_bounds(PixelCoord p) const { return in_bounds(p.row, p.col); }
    std::size_t size() const { return cells.size(); }

    /// Set of class ids present anywhere in the grid.
    kb::ClassSet class_set() const;

    /// FNV-1a over dimensions and cells; identifies the mask in task files.
    std::uint64_t content_hash() const;

    friend bool operator==(const SemanticMask&, const SemanticMask&) = default;
};

SemanticMask make_mask(int width, int height, std::uint8_t fill = 0);

/// Classes whose small regions are never absorbed by majority_fill:
/// Road (3), Water (5), Building (7).
bool is_fill_protected(int class_id);

/// Relabels every 4-connected region smaller than min_area (protected
/// classes excluded) to the most frequent class among the pixels bordering
/// it in the input. Single pass over the input labeling; min_area <= 1 is
/// the identity.
SemanticMask majority_fill(const SemanticMask& input, int min_area);

struct Region {
    int id = 0;  // 1-based; 0 is reserved for "absent"
    int class_id = 0;
    std::vector<PixelCoord> pixels;   // row-major order
    std::vector<PixelCoord> core;     // nonempty; see erode_core
    double centroid_row = 0.0;
    double centroid_col = 0.0;
    int min_row = 0, min_col = 0, max_row = 0, max_col = 0;

    int area() const { return static_cast<int>(pixels.size()); }
    PixelCoord anchor() const { return pixels.front(); }  // topmost-leftmost
};

struct RegionCatalog {
    std::vector<Region> regions;                     // sorted by id (1..N)
    std::array<int, kb::kNumClasses> per_class_primary{};  // 0 = class absent
    std::vector<std::int32_t> label;                 // pixel -> region id
    int width = 0, height = 0;

    const Region& by_id(int id) const { return regions[static_cast<std::size_t>(id) - 1]; }
    int region_at(int row, int col) const {
        return label[static_cast<std::size_t>(row) * width + col];
    }
};

/// Pure probe core of a region: pixels whose full in-bounds 8-neighborhood
/// is same-class, eroded iteratively up to `depth` steps. Stops early
/// rather than going empty; a region with no pure interior falls back to
/// the single pixel with maximal Chebyshev distance to any other class.
std::vector<PixelCoord> erode_core(const Region& region, const SemanticMask& mask, int depth);

/// 4-connected component labeling of the full grid. Region ids are
/// assigned in strictly decreasing area order, ties broken by the smaller
/// topmost-leftmost pixel, so the catalog is a deterministic function of
/// the mask.
RegionCatalog extract_regions(const SemanticMask& mask, int core_depth = 2);

/// Query/image pairing rule: the mask's classes must be a superset of the
/// query's allowed and start/end classes.
bool compatible(kb::ClassSet mask_classes, const kb::ScenarioConfig& config);

nlohmann::ordered_json catalog_to_json(const RegionCatalog& catalog);

}  // namespace routebench::mask
