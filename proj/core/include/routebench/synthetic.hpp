#pragma once

#include <cstdint>

#include "routebench/costmap.hpp"
#include "routebench/mask.hpp"
#include "routebench/rng.hpp"

namespace routebench::synthetic {

/// Voronoi-patch mask: `sites` seed points with classes assigned so all 8
/// classes appear among the first sites; each pixel takes the class of its
/// nearest site (ties to the lower site index). Deterministic per seed.
mask::SemanticMask voronoi_mask(int width, int height, int sites, std::uint64_t seed);

/// Two traversable half-planes of `free_class` split by a `wall_class` bar
/// with a single gap, so a straight line between the halves crosses the
/// wall but a detour exists. Exercises obstacle-aware planning.
mask::SemanticMask walled_mask(int width, int height, int free_class, int wall_class,
                               int gap_row, int wall_col);

/// Random planner workload: each pixel is an obstacle with the given
/// probability, otherwise a uniform cost in {1..max_cost}. Used by
/// `validate` and the planner cross-check suites.
plan::CostMap random_cost_map(int width, int height, double obstacle_density,
                              std::uint32_t max_cost, RngStream& rng);

}  // namespace routebench::synthetic
