#pragma once

#include <cstdint>
#include <vector>

#include "routebench/mask.hpp"

#include <nlohmann/json_fwd.hpp>

namespace routebench::graph {

/// Region-level connectivity. `adjacency` is the raw 4-adjacency matrix A;
/// `constrained` is A masked on both endpoints by class traversability.
/// Region ids are 1-based, matching the catalog.
struct RegionGraph {
    int node_count = 0;
    std::vector<std::uint8_t> adjacency;    // node_count^2, symmetric, zero diagonal
    std::vector<std::uint8_t> constrained;  // elementwise adjacency * trav_i * trav_j
    std::vector<std::uint8_t> node_traversable;
    std::vector<std::uint8_t> node_class;

    bool adjacent(int a, int b) const {
        return adjacency[static_cast<std::size_t>(a - 1) * node_count + (b - 1)] != 0;
    }
    bool constrained_adjacent(int a, int b) const {
        return constrained[static_cast<std::size_t>(a - 1) * node_count + (b - 1)] != 0;
    }
    bool traversable(int id) const { return node_traversable[static_cast<std::size_t>(id - 1)] != 0; }

    /// Undirected edge count of the unmasked adjacency.
    int edge_count() const;
};

RegionGraph build_graph(const mask::RegionCatalog& catalog, const mask::SemanticMask& mask,
                        const kb::ConstraintVectors& vectors);

/// True iff b can be reached from a over constrained edges through
/// traversable nodes. Throws Error on unknown ids.
bool reachable(const RegionGraph& graph, int a, int b);

struct EndpointPair {
    int start_region = 0;
    int end_region = 0;
    PixelCoord start_pixel;
    PixelCoord end_pixel;
};

/// Picks the centroid-distance-maximizing reachable region pair whose
/// classes match the config's start/end classes (ties: lexicographic id
/// order), then draws S and E from the regions' cores. Deterministic for a
/// given (catalog, config, seed). Throws NoValidPairError if no reachable
/// pair matches.
EndpointPair select_endpoints(const RegionGraph& graph, const mask::RegionCatalog& catalog,
                              const kb::ConstraintVectors& vectors,
                              const kb::ScenarioConfig& config, std::uint64_t rng_seed);

nlohmann::ordered_json graph_to_json(const RegionGraph& graph,
                                     const mask::RegionCatalog& catalog);

}  // namespace routebench::graph
