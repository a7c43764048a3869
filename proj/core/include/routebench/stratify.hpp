#pragma once

#include <array>
#include <string>
#include <vector>

#include "routebench/mask.hpp"
#include "routebench/region_graph.hpp"

namespace routebench::strat {

enum class Tier : std::uint8_t { Easy = 0, Medium, Hard };

const char* tier_name(Tier t);
Tier tier_from_string(const std::string& s);

/// Class-count stratification: Easy for M <= 4, Medium for 5..6, Hard for
/// 7..8. Throws Error for M outside 1..8.
Tier task2_tier(int class_count);

struct Lambdas {
    std::array<double, 4> w{0.25, 0.25, 0.25, 0.25};
};

struct ComplexityBreakdown {
    double h_inter = 0.0;  // inter-class area entropy (bits)
    double h_intra = 0.0;  // mean normalized fragmentation entropy
    double h_count = 0.0;  // region-count entropy (bits)
    double c_topo = 0.0;   // capped adjacency density of the raw graph
    Lambdas lambdas;
    double score = 0.0;
};

/// Scene complexity from area shares, per-class fragmentation, region
/// counts and raw adjacency density. Degenerate guards: a class with
/// N_k <= 1 regions contributes 0 fragmentation; density is 0 when the
/// graph has at most one node.
ComplexityBreakdown complexity(const mask::RegionCatalog& catalog,
                               const graph::RegionGraph& graph, const Lambdas& lambdas);

struct TierThresholds {
    double easy = 0.0;  // scores below are Easy
    double hard = 0.0;  // scores at or above are Hard
};

/// Easy iff score < easy threshold, Hard iff score >= hard threshold,
/// Medium otherwise.
Tier task3_tier(double score, const TierThresholds& thresholds);

/// Nearest-rank corpus quantiles (default 0.60 / 0.85) for automatic
/// threshold calibration. Throws Error on an empty corpus.
TierThresholds quantile_thresholds(std::vector<double> scores, double q_easy = 0.60,
                                   double q_hard = 0.85);

}  // namespace routebench::strat
