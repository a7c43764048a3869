#include "routebench/stratify.hpp"

#include <algorithm>
#include <cmath>

namespace routebench::strat {

namespace {
const char* const kTierNames[3] = {"Easy", "Medium", "Hard"};
}

const char* tier_name(Tier t) { return kTierNames[static_cast<int>(t)]; }

Tier tier_from_string(const std::string& s) {
    for (int i = 0; i < 3; ++i)
        if (s == kTierNames[i]) return static_cast<Tier>(i);
    throw Error("unknown tier: " + s);
}

Tier task2_tier(int class_count) {
    if (class_count < 1 || class_count > kb::kNumClasses)
        throw Error("class count out of range: " + std::to_string(class_count));
    if (class_count <= 4) return Tier::Easy;
    if (class_count <= 6) return Tier::Medium;
    return Tier::Hard;
}

ComplexityBreakdown complexity(const mask::RegionCatalog& catalog,
                               const graph::RegionGraph& graph, const Lambdas& lambdas) {
    std::array<double, kb::kNumClasses> class_area{};
    std::array<int, kb::kNumClasses> region_count{};
    double total_area = 0.0;
    for (const mask::Region& reg : catalog.regions) {
        class_area[reg.class_id] += reg.area();
        ++region_count[reg.class_id];
        total_area += reg.area();
    }
    const int total_regions = static_cast<int>(catalog.regions.size());

    ComplexityBreakdown out;
    out.lambdas = lambdas;

    for (int k = 0; k < kb::kNumClasses; ++k) {
        if (class_area[k] > 0.0) {
            const double u = class_area[k] / total_area;
            out.h_inter -= u * std::log2(u);
        }
        if (region_count[k] > 0) {
            const double v = static_cast<double>(region_count[k]) / total_regions;
            out.h_count -= v * std::log2(v);
        }
    }

    // Mean over the fixed L = 8 classes; classes with at most one region
    // (including absent ones) contribute 0.
    for (int k = 0; k < kb::kNumClasses; ++k) {
        if (region_count[k] <= 1) continue;
        double entropy = 0.0;
        for (const mask::Region& reg : catalog.regions) {
            if (reg.class_id != k) continue;
            const double p = reg.area() / class_area[k];
            entropy -= p * std::log2(p);
        }
        out.h_intra += entropy / std::log2(static_cast<double>(region_count[k]));
    }
    out.h_intra /= kb::kNumClasses;

    if (graph.node_count > 1) {
        const double nodes = graph.node_count;
        out.c_topo = std::min(1.0, 2.0 * graph.edge_count() / (nodes * (nodes - 1.0)));
    }

    out.score = lambdas.w[0] * out.h_inter + lambdas.w[1] * out.h_intra +
                lambdas.w[2] * out.h_count + lambdas.w[3] * out.c_topo;
    return out;
}

Tier task3_tier(double score, const TierThresholds& thresholds) {
    if (score < thresholds.easy) return Tier::Easy;
    if (score >= thresholds.hard) return Tier::Hard;
    return Tier::Medium;
}

TierThresholds quantile_thresholds(std::vector<double> scores, double q_easy, double q_hard) {
    if (scores.empty()) throw Error("cannot calibrate thresholds on an empty corpus");
    std::sort(scores.begin(), scores.end());
    const auto nearest_rank = [&](double q) {
        const auto n = static_cast<double>(scores.size());
        const std::size_t rank = static_cast<std::size_t>(std::ceil(q * n));
        return scores[std::min(scores.size() - 1, rank == 0 ? 0 : rank - 1)];
    };
    return {nearest_rank(q_easy), nearest_rank(q_hard)};
}

}  // namespace routebench::strat
