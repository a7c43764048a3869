#include "routebench/costmap.hpp"

#include <algorithm>

namespace routebench::plan {

CostMap build_cost_map(const mask::SemanticMask& mask, const kb::ConstraintVectors& vectors) {
    std::uint32_t max_pref = 0;
    for (int i = 0; i < kb::kNumClasses; ++i)
        max_pref = std::max<std::uint32_t>(max_pref, vectors.pref[i]);

    std::array<std::uint32_t, kb::kNumClasses> per_class;
    for (int i = 0; i < kb::kNumClasses; ++i)
        per_class[i] = vectors.trav[i] ? max_pref - vectors.pref[i] + 1 : CostMap::kInf;

    CostMap map;
    map.width = mask.width;
    map.height = mask.height;
    map.cost.resize(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) map.cost[i] = per_class[mask.cells[i]];
    return map;
}

}  // namespace routebench::plan
