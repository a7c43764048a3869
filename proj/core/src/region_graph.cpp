#include "routebench/region_graph.hpp"

#include <algorithm>
#include <queue>

#include <nlohmann/json.hpp>

#include "routebench/rng.hpp"

namespace routebench::graph {

int RegionGraph::edge_count() const {
    int edges = 0;
    for (int i = 0; i < node_count; ++i)
        for (int j = i + 1; j < node_count; ++j)
            edges += adjacency[static_cast<std::size_t>(i) * node_count + j];
    return edges;
}

RegionGraph build_graph(const mask::RegionCatalog& catalog, const mask::SemanticMask& m,
                        const kb::ConstraintVectors& vectors) {
    RegionGraph g;
    g.node_count = static_cast<int>(catalog.regions.size());
    const std::size_t n = static_cast<std::size_t>(g.node_count);
    g.adjacency.assign(n * n, 0);
    g.constrained.assign(n * n, 0);
    g.node_traversable.resize(n);
    g.node_class.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        g.node_class[i] = static_cast<std::uint8_t>(catalog.regions[i].class_id);
        g.node_traversable[i] = vectors.trav[catalog.regions[i].class_id];
    }

    auto connect = [&](int id_a, int id_b) {
        if (id_a == id_b) return;
        const std::size_t i = static_cast<std::size_t>(id_a) - 1;
        const std::size_t j = static_cast<std::size_t>(id_b) - 1;
        g.adjacency[i * n + j] = g.adjacency[j * n + i] = 1;
    };
    for (int r = 0; r < m.height; ++r) {
        for (int c = 0; c < m.width; ++c) {
            const int id = catalog.region_at(r, c);
            if (c + 1 < m.width) connect(id, catalog.region_at(r, c + 1));
            if (r + 1 < m.height) connect(id, catalog.region_at(r + 1, c));
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            g.constrained[i * n + j] = static_cast<std::uint8_t>(
                g.adjacency[i * n + j] & g.node_traversable[i] & g.node_traversable[j]);
    return g;
}

bool reachable(const RegionGraph& graph, int a, int b) {
    if (a < 1 || a > graph.node_count || b < 1 || b > graph.node_count)
        throw Error("reachable: unknown region id");
    if (!graph.traversable(a) || !graph.traversable(b)) return false;
    if (a == b) return true;

    std::vector<char> visited(static_cast<std::size_t>(graph.node_count), 0);
    std::queue<int> frontier;
    visited[a - 1] = 1;
    frontier.push(a);
    while (!frontier.empty()) {
        const int cur = frontier.front();
        frontier.pop();
        for (int next = 1; next <= graph.node_count; ++next) {
            if (visited[next - 1] || !graph.constrained_adjacent(cur, next)) continue;
            if (next == b) return true;
            visited[next - 1] = 1;
            frontier.push(next);
        }
    }
    return false;
}

namespace {

// Connected component label per node over constrained edges; non-traversable
// nodes get component 0.
std::vector<int> constrained_components(const RegionGraph& graph) {
    std::vector<int> comp(static_cast<std::size_t>(graph.node_count), 0);
    int next_label = 0;
    for (int seed = 1; seed <= graph.node_count; ++seed) {
        if (comp[seed - 1] != 0 || !graph.traversable(seed)) continue;
        ++next_label;
        std::queue<int> frontier;
        comp[seed - 1] = next_label;
        frontier.push(seed);
        while (!frontier.empty()) {
            const int cur = frontier.front();
            frontier.pop();
            for (int next = 1; next <= graph.node_count; ++next) {
                if (comp[next - 1] == 0 && graph.constrained_adjacent(cur, next)) {
                    comp[next - 1] = next_label;
                    frontier.push(next);
                }
            }
        }
    }
    return comp;
}

}  // namespace

EndpointPair select_endpoints(const RegionGraph& graph, const mask::RegionCatalog& catalog,
                              const kb::ConstraintVectors& vectors,
                              const kb::ScenarioConfig& config, std::uint64_t rng_seed) {
    const auto comp = constrained_components(graph);

    std::vector<int> starts, ends;
    for (const mask::Region& reg : catalog.regions) {
        if (!vectors.trav[reg.class_id] || comp[reg.id - 1] == 0) continue;
        if (reg.class_id == config.start_class) starts.push_back(reg.id);
        if (reg.class_id == config.end_class) ends.push_back(reg.id);
    }

    int best_s = 0, best_e = 0;
    double best_dist = -1.0;
    for (int s : starts) {
        for (int e : ends) {
            if (comp[s - 1] != comp[e - 1]) continue;
            const mask::Region& rs = catalog.by_id(s);
            const mask::Region& re = catalog.by_id(e);
            const double dr = rs.centroid_row - re.centroid_row;
            const double dc = rs.centroid_col - re.centroid_col;
            const double dist = dr * dr + dc * dc;
            if (dist > best_dist ||
                (dist == best_dist && std::pair{s, e} < std::pair{best_s, best_e})) {
                best_dist = dist;
                best_s = s;
                best_e = e;
            }
        }
    }
    if (best_s == 0)
        throw NoValidPairError("no reachable region pair matches the start/end classes");

    EndpointPair pair;
    pair.start_region = best_s;
    pair.end_region = best_e;
    RngStream rng(rng_seed);
    const auto& start_core = catalog.by_id(best_s).core;
    const auto& end_core = catalog.by_id(best_e).core;
    pair.start_pixel = start_core[rng.bounded(start_core.size())];
    pair.end_pixel = end_core[rng.bounded(end_core.size())];
    if (best_s == best_e && pair.start_pixel == pair.end_pixel && end_core.size() > 1) {
        // Same-region draw collided; step to the next core pixel.
        const auto it = std::find(end_core.begin(), end_core.end(), pair.end_pixel);
        const std::size_t idx = static_cast<std::size_t>(it - end_core.begin());
        pair.end_pixel = end_core[(idx + 1) % end_core.size()];
    }
    return pair;
}

nlohmann::ordered_json graph_to_json(const RegionGraph& graph,
                                     const mask::RegionCatalog& catalog) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["node_count"] = graph.node_count;
    auto& nodes = doc["nodes"] = nlohmann::ordered_json::array();
    for (const mask::Region& reg : catalog.regions) {
        nlohmann::ordered_json node{{"id", reg.id},
                                    {"class_id", reg.class_id},
                                    {"area", reg.area()}};
        auto& neighbors = node["adjacent"] = nlohmann::ordered_json::array();
        for (int other = 1; other <= graph.node_count; ++other)
            if (graph.adjacent(reg.id, other)) neighbors.push_back(other);
        nodes.push_back(std::move(node));
    }
    return doc;
}

}  // namespace routebench::graph
