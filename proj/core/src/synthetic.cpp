#include "routebench/synthetic.hpp"

#include <vector>

#include "routebench/rng.hpp"

namespace routebench::synthetic {

mask::SemanticMask voronoi_mask(int width, int height, int sites, std::uint64_t seed) {
    RngStream rng(seed);
    struct Site {
        int row, col;
        std::uint8_t cls;
    };
    std::vector<Site> points;
    points.reserve(static_cast<std::size_t>(sites));
    for (int i = 0; i < sites; ++i) {
        Site s;
        s.row = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(height)));
        s.col = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(width)));
        s.cls = i < kb::kNumClasses ? static_cast<std::uint8_t>(i)
                                    : static_cast<std::uint8_t>(rng.bounded(kb::kNumClasses));
        points.push_back(s);
    }

    mask::SemanticMask m = mask::make_mask(width, height);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            std::int64_t best = -1;
            std::uint8_t cls = 0;
            for (const Site& s : points) {
                const std::int64_t dr = r - s.row;
                const std::int64_t dc = c - s.col;
                const std::int64_t d2 = dr * dr + dc * dc;
                if (best < 0 || d2 < best) {
                    best = d2;
                    cls = s.cls;
                }
            }
            m.at(r, c) = cls;
        }
    }
    return m;
}

mask::SemanticMask walled_mask(int width, int height, int free_class, int wall_class,
                               int gap_row, int wall_col) {
    mask::SemanticMask m = mask::make_mask(width, height, static_cast<std::uint8_t>(free_class));
    for (int r = 0; r < height; ++r) {
        if (r == gap_row) continue;
        m.at(r, wall_col) = static_cast<std::uint8_t>(wall_class);
    }
    return m;
}

plan::CostMap random_cost_map(int width, int height, double obstacle_density,
                              std::uint32_t max_cost, RngStream& rng) {
    plan::CostMap map;
    map.width = width;
    map.height = height;
    map.cost.resize(static_cast<std::size_t>(width) * height);
    const std::uint64_t threshold =
        static_cast<std::uint64_t>(obstacle_density * 1000000.0);
    for (auto& cell : map.cost) {
        if (rng.bounded(1000000) < threshold)
            cell = plan::CostMap::kInf;
        else
            cell = 1 + static_cast<std::uint32_t>(rng.bounded(max_cost));
    }
    return map;
}

}  // namespace routebench::synthetic
