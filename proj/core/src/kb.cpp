#include "routebench/kb.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace routebench::kb {

namespace {

const char* const kClassNames[kNumClasses] = {
    "Bareland",         "Rangeland", "Developed space", "Road",
    "Tree",             "Water",     "Agriculture land", "Building",
};

const char* const kAgentNames[kNumAgents] = {"Pedestrian", "Car", "Drone", "Boat"};
const char* const kObjectiveNames[kNumObjectives] = {"Fastest", "Comfort", "Safest", "Shortest"};

// Ranking rows written as ordered tier groups, highest priority first.
// {{2}, {3}} means c2 > c3; {{0, 1}} means c0 = c1.
using TierGroups = std::vector<std::vector<int>>;

std::array<std::uint8_t, kNumClasses> to_tier_vector(const TierGroups& groups) {
    std::array<std::uint8_t, kNumClasses> out{};
    const int top = static_cast<int>(groups.size());
    for (int g = 0; g < top; ++g)
        for (int cls : groups[g])
            out[cls] = static_cast<std::uint8_t>(top - g);
    return out;
}

}  // namespace

const char* class_name(int id) { return kClassNames[id]; }
const char* agent_name(Agent a) { return kAgentNames[static_cast<int>(a)]; }
const char* objective_name(Objective o) { return kObjectiveNames[static_cast<int>(o)]; }

Agent agent_from_string(const std::string& s) {
    for (int i = 0; i < kNumAgents; ++i)
        if (s == kAgentNames[i]) return static_cast<Agent>(i);
    throw Error("unknown agent: " + s);
}

Objective objective_from_string(const std::string& s) {
    for (int i = 0; i < kNumObjectives; ++i)
        if (s == kObjectiveNames[i]) return static_cast<Objective>(i);
    throw Error("unknown objective: " + s);
}

KnowledgeBase::KnowledgeBase() {
    tiers_[static_cast<int>(Agent::Pedestrian)] = {{2, 3}, {0, 1, 4, 6}, {5, 7}};
    tiers_[static_cast<int>(Agent::Car)] = {{2, 3}, {0, 1, 6}, {4, 5, 7}};
    tiers_[static_cast<int>(Agent::Drone)] = {{0, 1, 2, 3, 5, 6}, {4, 7}, {}};
    tiers_[static_cast<int>(Agent::Boat)] = {{5}, {}, {0, 1, 2, 3, 4, 6, 7}};

    auto set = [&](Agent a, Objective o, const TierGroups& groups) {
        rankings_[static_cast<int>(a)][static_cast<int>(o)] = to_tier_vector(groups);
    };

    const TierGroups ped_flat = {{0, 1, 2, 3, 4, 6}};
    const TierGroups ped_ranked = {{2}, {3}, {6}, {1}, {0}, {4}};
    set(Agent::Pedestrian, Objective::Fastest, ped_flat);
    set(Agent::Pedestrian, Objective::Comfort, ped_ranked);
    set(Agent::Pedestrian, Objective::Safest, ped_ranked);
    set(Agent::Pedestrian, Objective::Shortest, ped_flat);

    const TierGroups car_ranked = {{3}, {2}, {6}, {1}, {0}};
    set(Agent::Car, Objective::Fastest, car_ranked);
    set(Agent::Car, Objective::Comfort, car_ranked);
    set(Agent::Car, Objective::Safest, car_ranked);
    set(Agent::Car, Objective::Shortest, {{0, 1, 2, 3, 6}});

    set(Agent::Drone, Objective::Fastest, {{0, 1, 2, 3, 5, 6, 7}, {4}});
    set(Agent::Drone, Objective::Comfort, {{0, 1, 2, 3, 6, 7}, {5}, {4}});
    set(Agent::Drone, Objective::Safest, {{0, 1, 2, 3, 6}, {4, 5, 7}});
    set(Agent::Drone, Objective::Shortest, {{0, 1, 2, 3, 5, 6, 7}, {4}});

    const TierGroups boat = {{5}};
    for (Objective o : {Objective::Fastest, Objective::Comfort, Objective::Safest,
                        Objective::Shortest})
        set(Agent::Boat, o, boat);
}

const KnowledgeBase& KnowledgeBase::instance() {
    static const KnowledgeBase kb;
    return kb;
}

const AgentTiers& KnowledgeBase::tiers(Agent a) const { return tiers_[static_cast<int>(a)]; }

const std::array<std::uint8_t, kNumClasses>& KnowledgeBase::ranking(Agent a, Objective o) const {
    return rankings_[static_cast<int>(a)][static_cast<int>(o)];
}

std::array<std::uint8_t, kNumClasses> canonicalize_pref(
    std::span<const std::uint8_t, kNumClasses> raw_pref,
    std::span<const std::uint8_t, kNumClasses> trav) {
    // Distinct raw values on traversable positions, ascending; the tier of
    // a class is 1 + the rank of its raw value.
    std::array<std::uint8_t, kNumClasses> out{};
    std::vector<std::uint8_t> values;
    for (int i = 0; i < kNumClasses; ++i)
        if (trav[i]) values.push_back(raw_pref[i]);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (int i = 0; i < kNumClasses; ++i) {
        if (!trav[i]) continue;
        const auto it = std::lower_bound(values.begin(), values.end(), raw_pref[i]);
        out[i] = static_cast<std::uint8_t>(1 + (it - values.begin()));
    }
    return out;
}

ConstraintVectors KnowledgeBase::derive_vectors(const ScenarioConfig& config) const {
    const AgentTiers& t = tiers(config.agent);
    if (!(config.allowed & t.never).empty())
        throw KbViolationError("allowed_classes contains a non-traversable class for " +
                               std::string(agent_name(config.agent)));
    if (config.allowed.empty())
        throw KbViolationError("allowed_classes is empty");
    if (!config.allowed.contains(config.start_class) ||
        !config.allowed.contains(config.end_class))
        throw KbViolationError("start/end classes must be members of allowed_classes");

    ConstraintVectors v;
    for (int i = 0; i < kNumClasses; ++i)
        v.trav[i] = config.allowed.contains(i) ? 1 : 0;
    const auto& row = ranking(config.agent, config.objective);
    v.pref = canonicalize_pref(row, v.trav);
    return v;
}

nlohmann::ordered_json KnowledgeBase::to_json() const {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    auto& classes = doc["classes"] = nlohmann::ordered_json::array();
    for (int i = 0; i < kNumClasses; ++i)
        classes.push_back({{"id", i}, {"name", kClassNames[i]}});

    auto& agents = doc["agents"] = nlohmann::ordered_json::array();
    for (int a = 0; a < kNumAgents; ++a) {
        const AgentTiers& t = tiers_[a];
        agents.push_back({{"agent", kAgentNames[a]},
                          {"always", t.always.ids()},
                          {"conditional", t.conditional.ids()},
                          {"never", t.never.ids()}});
    }

    auto& rankings = doc["rankings"] = nlohmann::ordered_json::array();
    for (int a = 0; a < kNumAgents; ++a)
        for (int o = 0; o < kNumObjectives; ++o)
            rankings.push_back({{"agent", kAgentNames[a]},
                                {"objective", kObjectiveNames[o]},
                                {"tiers", rankings_[a][o]}});
    return doc;
}

}  // namespace routebench::kb
