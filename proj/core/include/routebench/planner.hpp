#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "routebench/costmap.hpp"

namespace routebench::plan {

struct Trajectory {
    std::vector<PixelCoord> waypoints;
};

struct PlanResult {
    Trajectory path;
    std::uint64_t total_cost = 0;  // sum of W over every path pixel, start included
};

/// Optimal 4-connected path from start to end under the cost map, found by
/// A-Star with the Euclidean heuristic h(p) = ||p - end||_2. The heuristic
/// is admissible and consistent on this grid (every step costs >= 1 and
/// moves 1 in L2), so the returned path minimizes the cumulative cost.
/// Ties are popped by (f, h, row-major index), which pins one trajectory.
/// Returns nullopt when no finite-cost path exists; throws Error when an
/// endpoint is out of bounds or non-traversable.
std::optional<PlanResult> astar(const CostMap& map, PixelCoord start, PixelCoord end);

/// Uninformed uniform-cost search with identical cost accounting. Test and
/// `validate` oracle for astar; independently implemented on purpose.
std::optional<std::uint64_t> dijkstra_cost(const CostMap& map, PixelCoord start, PixelCoord end);

/// All-to-one field of optimal costs into `end` (kUnreachableCost where no
/// path exists). Used by admissibility checks.
inline constexpr std::uint64_t kUnreachableCost = std::numeric_limits<std::uint64_t>::max();
std::vector<std::uint64_t> dijkstra_field(const CostMap& map, PixelCoord end);

/// Integer-error Bresenham raster from a to b inclusive. The segment is
/// always traced from the lexicographically smaller endpoint and reversed
/// if needed, so pixels(a,b) == reverse(pixels(b,a)).
std::vector<PixelCoord> bresenham(PixelCoord a, PixelCoord b);

enum class LegMethod : std::uint8_t { Search, Line };

struct DensePath {
    std::vector<PixelCoord> pixels;
    std::vector<LegMethod> legs;  // one entry per waypoint gap

    bool used_line_fallback() const {
        for (LegMethod m : legs)
            if (m == LegMethod::Line) return true;
        return false;
    }
};

/// Joins consecutive waypoints into a dense pixel path. Compliant samples
/// use A-Star legs on the cost map (an unreachable leg degrades to a
/// Bresenham leg tagged Line); non-compliant samples use Bresenham legs
/// throughout. Junction pixels are deduplicated. Throws Error on an empty
/// waypoint list.
DensePath reconstruct_dense(const std::vector<PixelCoord>& waypoints, const CostMap& map,
                            bool compliant);

}  // namespace routebench::plan
