#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "routebench/kb.hpp"
#include "routebench/mask.hpp"

namespace routebench::plan {

/// Per-pixel traversal cost: kInf on non-traversable classes, otherwise
/// max(pref) - pref[class] + 1 (so the most preferred terrain costs 1).
struct CostMap {
    static constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

    int width = 0;
    int height = 0;
    std::vector<std::uint32_t> cost;

    std::uint32_t at(int row, int col) const {
        return cost[static_cast<std::size_t>(row) * width + col];
    }
    std::uint32_t at(PixelCoord p) const { return at(p.row, p.col); }
    bool in_bounds(PixelCoord p) const {
        return p.row >= 0 && p.row < height && p.col >= 0 && p.col < width;
    }
    bool finite(PixelCoord p) const { return in_bounds(p) && at(p) != kInf; }
    std::size_t size() const { return cost.size(); }
};

CostMap build_cost_map(const mask::SemanticMask& mask, const kb::ConstraintVectors& vectors);

}  // namespace routebench::plan
