#include "routebench/planner.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace routebench::plan {

namespace {

constexpr int kRowStep[4] = {-1, 1, 0, 0};
constexpr int kColStep[4] = {0, 0, -1, 1};

struct OpenNode {
    double f;
    double h;
    std::uint32_t idx;
};

// Min-heap order: lowest f first, then lowest h, then row-major index.
struct OpenNodeAfter {
    bool operator()(const OpenNode& a, const OpenNode& b) const {
        if (a.f != b.f) return a.f > b.f;
        if (a.h != b.h) return a.h > b.h;
        return a.idx > b.idx;
    }
};

void check_endpoint(const CostMap& map, PixelCoord p, const char* which) {
    if (!map.in_bounds(p)) throw Error(std::string(which) + " endpoint out of bounds");
    if (map.at(p) == CostMap::kInf)
        throw Error(std::string(which) + " endpoint is on a non-traversable pixel");
}

}  // namespace

std::optional<PlanResult> astar(const CostMap& map, PixelCoord start, PixelCoord end) {
    check_endpoint(map, start, "start");
    check_endpoint(map, end, "end");

    const std::size_t cells = map.size();
    const auto to_idx = [&](PixelCoord p) {
        return static_cast<std::uint32_t>(p.row) * static_cast<std::uint32_t>(map.width) + p.col;
    };
    const auto heur = [&](PixelCoord p) { return euclidean(p, end); };

    std::vector<std::uint64_t> g(cells, kUnreachableCost);
    std::vector<std::int32_t> parent(cells, -1);
    std::vector<char> closed(cells, 0);
    std::priority_queue<OpenNode, std::vector<OpenNode>, OpenNodeAfter> open;

    const std::uint32_t start_idx = to_idx(start);
    const std::uint32_t end_idx = to_idx(end);
    g[start_idx] = map.at(start);
    open.push({static_cast<double>(g[start_idx]) + heur(start), heur(start), start_idx});

    while (!open.empty()) {
        const OpenNode top = open.top();
        open.pop();
        if (closed[top.idx]) continue;  // stale queue entry
        closed[top.idx] = 1;
        if (top.idx == end_idx) break;

        const PixelCoord p{static_cast<std::int32_t>(top.idx / map.width),
                           static_cast<std::int32_t>(top.idx % map.width)};
        for (int d = 0; d < 4; ++d) {
            const PixelCoord q{p.row + kRowStep[d], p.col + kColStep[d]};
            if (!map.in_bounds(q)) continue;
            const std::uint32_t w = map.at(q);
            if (w == CostMap::kInf) continue;
            const std::uint32_t qi = to_idx(q);
            if (closed[qi]) continue;
            const std::uint64_t candidate = g[top.idx] + w;
            if (candidate < g[qi]) {
                g[qi] = candidate;
                parent[qi] = static_cast<std::int32_t>(top.idx);
                const double h = heur(q);
                open.push({static_cast<double>(candidate) + h, h, qi});
            }
        }
    }

    if (!closed[end_idx]) return std::nullopt;

    PlanResult result;
    result.total_cost = g[end_idx];
    std::vector<PixelCoord>& waypoints = result.path.waypoints;
    for (std::int32_t idx = static_cast<std::int32_t>(end_idx); idx >= 0; idx = parent[idx]) {
        waypoints.push_back({idx / map.width, idx % map.width});
        if (static_cast<std::uint32_t>(idx) == start_idx) break;
    }
    std::reverse(waypoints.begin(), waypoints.end());
    return result;
}

std::optional<std::uint64_t> dijkstra_cost(const CostMap& map, PixelCoord start, PixelCoord end) {
    check_endpoint(map, start, "start");
    check_endpoint(map, end, "end");
    const auto field = dijkstra_field(map, start);
    const std::uint64_t d =
        field[static_cast<std::size_t>(end.row) * map.width + end.col];
    if (d == kUnreachableCost) return std::nullopt;
    return d;
}

std::vector<std::uint64_t> dijkstra_field(const CostMap& map, PixelCoord end) {
    const std::size_t cells = map.size();
    std::vector<std::uint64_t> dist(cells, kUnreachableCost);
    using Entry = std::pair<std::uint64_t, std::uint32_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

    if (!map.in_bounds(end) || map.at(end) == CostMap::kInf) return dist;
    const std::uint32_t end_idx =
        static_cast<std::uint32_t>(end.row) * static_cast<std::uint32_t>(map.width) + end.col;
    dist[end_idx] = map.at(end);
    open.push({dist[end_idx], end_idx});

    while (!open.empty()) {
        const auto [d, idx] = open.top();
        open.pop();
        if (d != dist[idx]) continue;
        const int row = static_cast<int>(idx / map.width);
        const int col = static_cast<int>(idx % map.width);
        for (int k = 0; k < 4; ++k) {
            const int nr = row + kRowStep[k];
            const int nc = col + kColStep[k];
            if (nr < 0 || nr >= map.height || nc < 0 || nc >= map.width) continue;
            const std::uint32_t w = map.at(nr, nc);
            if (w == CostMap::kInf) continue;
            const std::uint32_t ni = static_cast<std::uint32_t>(nr) * map.width + nc;
            const std::uint64_t nd = d + w;
            if (nd < dist[ni]) {
                dist[ni] = nd;
                open.push({nd, ni});
            }
        }
    }
    return dist;
}

std::vector<PixelCoord> bresenham(PixelCoord a, PixelCoord b) {
    // Canonical trace order: lexicographically smaller endpoint first, so
    // the raster is symmetric under endpoint swap.
    if (b < a) {
        auto pixels = bresenham(b, a);
        std::reverse(pixels.begin(), pixels.end());
        return pixels;
    }

    const std::int64_t dc = std::abs(static_cast<std::int64_t>(b.col) - a.col);
    const std::int64_t dr = -std::abs(static_cast<std::int64_t>(b.row) - a.row);
    const int step_c = a.col < b.col ? 1 : -1;
    const int step_r = a.row < b.row ? 1 : -1;
    std::int64_t err = dc + dr;

    std::vector<PixelCoord> pixels;
    pixels.reserve(static_cast<std::size_t>(std::max(dc, -dr)) + 1);
    PixelCoord p = a;
    while (true) {
        pixels.push_back(p);
        if (p == b) break;
        const std::int64_t e2 = 2 * err;
        if (e2 >= dr) {
            err += dr;
            p.col += step_c;
        }
        if (e2 <= dc) {
            err += dc;
            p.row += step_r;
        }
    }
    return pixels;
}

DensePath reconstruct_dense(const std::vector<PixelCoord>& waypoints, const CostMap& map,
                            bool compliant) {
    if (waypoints.empty()) throw Error("reconstruct_dense: empty waypoint list");

    DensePath dense;
    dense.pixels.push_back(waypoints.front());
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
        const PixelCoord a = waypoints[i - 1];
        const PixelCoord b = waypoints[i];

        std::vector<PixelCoord> leg;
        LegMethod method = LegMethod::Line;
        if (compliant && map.finite(a) && map.finite(b)) {
            const bool adjacent = std::abs(a.row - b.row) + std::abs(a.col - b.col) == 1;
            if (a == b) {
                leg = {a};
                method = LegMethod::Search;
            } else if (adjacent) {
                leg = {a, b};
                method = LegMethod::Search;
            } else if (auto res = astar(map, a, b)) {
                leg = std::move(res->path.waypoints);
                method = LegMethod::Search;
            } else {
                leg = bresenham(a, b);
            }
        } else {
            leg = bresenham(a, b);
        }
        dense.legs.push_back(method);
        for (std::size_t k = 0; k < leg.size(); ++k) {
            if (k == 0 && leg[k] == dense.pixels.back()) continue;
            dense.pixels.push_back(leg[k]);
        }
    }
    return dense;
}

}  // namespace routebench::plan
