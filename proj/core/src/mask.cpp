#include "routebench/mask.hpp"

#include <algorithm>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace routebench::mask {

namespace {

constexpr int kRowStep[4] = {-1, 1, 0, 0};
constexpr int kColStep[4] = {0, 0, -1, 1};

}  // namespace

kb::ClassSet SemanticMask::class_set() const {
    kb::ClassSet s;
    for (std::uint8_t c : cells) s.add(c);
    return s;
}

std::uint64_t SemanticMask::content_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint8_t byte) {
        h ^= byte;
        h *= 0x100000001b3ULL;
    };
    for (int shift = 0; shift < 32; shift += 8) mix(static_cast<std::uint8_t>(width >> shift));
    for (int shift = 0; shift < 32; shift += 8) mix(static_cast<std::uint8_t>(height >> shift));
    for (std::uint8_t c : cells) mix(c);
    return h;
}

SemanticMask make_mask(int width, int height, std::uint8_t fill) {
    SemanticMask m;
    m.width = width;
    m.height = height;
    m.cells.assign(static_cast<std::size_t>(width) * height, fill);
    return m;
}

bool is_fill_protected(int class_id) {
    return class_id == 3 || class_id == 5 || class_id == 7;
}

namespace {

// Flood-fills the 4-connected component containing (r0, c0); returns its
// pixels in row-major order.
std::vector<PixelCoord> flood_component(const SemanticMask& m, std::vector<char>& seen,
                                        int r0, int c0) {
    const std::uint8_t cls = m.at(r0, c0);
    std::vector<PixelCoord> pixels;
    std::vector<PixelCoord> stack{{r0, c0}};
    seen[static_cast<std::size_t>(r0) * m.width + c0] = 1;
    while (!stack.empty()) {
        const PixelCoord p = stack.back();
        stack.pop_back();
        pixels.push_back(p);
        for (int d = 0; d < 4; ++d) {
            const int nr = p.row + kRowStep[d];
            const int nc = p.col + kColStep[d];
            if (!m.in_bounds(nr, nc) || m.at(nr, nc) != cls) continue;
            const std::size_t idx = static_cast<std::size_t>(nr) * m.width + nc;
            if (seen[idx]) continue;
            seen[idx] = 1;
            stack.push_back({nr, nc});
        }
    }
    std::sort(pixels.begin(), pixels.end());
    return pixels;
}

}  // namespace

SemanticMask majority_fill(const SemanticMask& input, int min_area) {
    SemanticMask out = input;
    if (min_area <= 1) return out;

    std::vector<char> seen(input.size(), 0);
    for (int r = 0; r < input.height; ++r) {
        for (int c = 0; c < input.width; ++c) {
            if (seen[static_cast<std::size_t>(r) * input.width + c]) continue;
            const std::uint8_t cls = input.at(r, c);
            const auto pixels = flood_component(input, seen, r, c);
            if (static_cast<int>(pixels.size()) >= min_area || is_fill_protected(cls)) continue;

            // Majority vote over the distinct border pixels of the input;
            // ties go to the smaller class id. A component with no border
            // (whole image) stays put.
            std::array<int, kb::kNumClasses> votes{};
            std::unordered_set<PixelCoord> border;
            for (const PixelCoord& p : pixels) {
                for (int d = 0; d < 4; ++d) {
                    const int nr = p.row + kRowStep[d];
                    const int nc = p.col + kColStep[d];
                    if (input.in_bounds(nr, nc) && input.at(nr, nc) != cls &&
                        border.insert({nr, nc}).second)
                        ++votes[input.at(nr, nc)];
                }
            }
            const int best =
                static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
            if (votes[best] == 0) continue;
            for (const PixelCoord& p : pixels) out.at(p.row, p.col) = static_cast<std::uint8_t>(best);
        }
    }
    return out;
}

namespace {

// One erosion step over an arbitrary pixel set: keep p iff every in-bounds
// 8-neighbor satisfies `inside`.
template <typename Pred>
std::vector<PixelCoord> erode_once(const std::vector<PixelCoord>& set, const SemanticMask& m,
                                   Pred inside) {
    std::vector<PixelCoord> next;
    for (const PixelCoord& p : set) {
        bool keep = true;
        for (int dr = -1; dr <= 1 && keep; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const int nr = p.row + dr;
                const int nc = p.col + dc;
                if (m.in_bounds(nr, nc) && !inside(nr, nc)) {
                    keep = false;
                    break;
                }
            }
        }
        if (keep) next.push_back(p);
    }
    return next;
}

}  // namespace

std::vector<PixelCoord> erode_core(const Region& region, const SemanticMask& mask, int depth) {
    std::vector<PixelCoord> current = region.pixels;
    if (depth <= 0) return current;

    const std::uint8_t cls = static_cast<std::uint8_t>(region.class_id);
    // First step filters on class purity; later steps are plain binary
    // erosion of the surviving set.
    std::vector<PixelCoord> next =
        erode_once(current, mask, [&](int r, int c) { return mask.at(r, c) == cls; });
    if (next.empty()) {
        // No pixel has a pure neighborhood, so every pixel is at Chebyshev
        // distance 1 from another class; the max-distance tie-break is the
        // topmost-leftmost pixel.
        return {region.pixels.front()};
    }
    current = std::move(next);

    for (int step = 1; step < depth; ++step) {
        // Membership bitmap over the surviving set's bounding box.
        int min_r = current.front().row, max_r = current.front().row;
        int min_c = current.front().col, max_c = current.front().col;
        for (const PixelCoord& p : current) {
            min_r = std::min(min_r, p.row);
            max_r = std::max(max_r, p.row);
            min_c = std::min(min_c, p.col);
            max_c = std::max(max_c, p.col);
        }
        const int bw = max_c - min_c + 1;
        std::vector<char> member(static_cast<std::size_t>(max_r - min_r + 1) * bw, 0);
        for (const PixelCoord& p : current)
            member[static_cast<std::size_t>(p.row - min_r) * bw + (p.col - min_c)] = 1;
        auto is_member = [&](int r, int c) {
            if (r < min_r || r > max_r || c < min_c || c > max_c) return false;
            return member[static_cast<std::size_t>(r - min_r) * bw + (c - min_c)] != 0;
        };
        next = erode_once(current, mask, is_member);
        if (next.empty()) break;
        current = std::move(next);
    }
    return current;
}

RegionCatalog extract_regions(const SemanticMask& mask, int core_depth) {
    RegionCatalog catalog;
    catalog.width = mask.width;
    catalog.height = mask.height;
    catalog.label.assign(mask.size(), 0);

    std::vector<Region> regions;
    std::vector<char> seen(mask.size(), 0);
    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            if (seen[static_cast<std::size_t>(r) * mask.width + c]) continue;
            Region reg;
            reg.class_id = mask.at(r, c);
            reg.pixels = flood_component(mask, seen, r, c);
            regions.push_back(std::move(reg));
        }
    }

    std::sort(regions.begin(), regions.end(), [](const Region& a, const Region& b) {
        if (a.pixels.size() != b.pixels.size()) return a.pixels.size() > b.pixels.size();
        return a.anchor() < b.anchor();
    });

    catalog.per_class_primary.fill(0);
    for (std::size_t i = 0; i < regions.size(); ++i) {
        Region& reg = regions[i];
        reg.id = static_cast<int>(i) + 1;

        double sum_r = 0.0, sum_c = 0.0;
        reg.min_row = reg.max_row = reg.pixels.front().row;
        reg.min_col = reg.max_col = reg.pixels.front().col;
        for (const PixelCoord& p : reg.pixels) {
            sum_r += p.row;
            sum_c += p.col;
            reg.min_row = std::min(reg.min_row, p.row);
            reg.max_row = std::max(reg.max_row, p.row);
            reg.min_col = std::min(reg.min_col, p.col);
            reg.max_col = std::max(reg.max_col, p.col);
            catalog.label[static_cast<std::size_t>(p.row) * mask.width + p.col] = reg.id;
        }
        reg.centroid_row = sum_r / reg.area();
        reg.centroid_col = sum_c / reg.area();
        reg.core = erode_core(reg, mask, core_depth);

        if (catalog.per_class_primary[reg.class_id] == 0)
            catalog.per_class_primary[reg.class_id] = reg.id;
    }
    catalog.regions = std::move(regions);
    return catalog;
}

bool compatible(kb::ClassSet mask_classes, const kb::ScenarioConfig& config) {
    kb::ClassSet needed = config.allowed;
    needed.add(config.start_class);
    needed.add(config.end_class);
    return mask_classes.contains_all(needed);
}

nlohmann::ordered_json catalog_to_json(const RegionCatalog& catalog) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["width"] = catalog.width;
    doc["height"] = catalog.height;
    auto& regions = doc["regions"] = nlohmann::ordered_json::array();
    for (const Region& reg : catalog.regions) {
        regions.push_back({{"id", reg.id},
                           {"class_id", reg.class_id},
                           {"class_name", kb::class_name(reg.class_id)},
                           {"area", reg.area()},
                           {"centroid", {reg.centroid_row, reg.centroid_col}},
                           {"bbox", {reg.min_row, reg.min_col, reg.max_row, reg.max_col}},
                           {"core_point", {reg.core.front().row, reg.core.front().col}}});
    }
    doc["per_class_primary"] = catalog.per_class_primary;
    return doc;
}

}  // namespace routebench::mask
