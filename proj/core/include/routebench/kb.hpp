#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "routebench/common.hpp"

#include <nlohmann/json_fwd.hpp>

namespace routebench::kb {

inline constexpr int kNumClasses = 8;
/// Maximum priority tier: at most 8 distinct tiers are possible.
inline constexpr int kMaxTier = 8;

enum class Agent : std::uint8_t { Pedestrian = 0, Car, Drone, Boat };
enum class Objective : std::uint8_t { Fastest = 0, Comfort, Safest, Shortest };

inline constexpr int kNumAgents = 4;
inline constexpr int kNumObjectives = 4;

const char* class_name(int id);
const char* agent_name(Agent a);
const char* objective_name(Objective o);
Agent agent_from_string(const std::string& s);
Objective objective_from_string(const std::string& s);

/// Small set over the 8 land-cover class ids.
class ClassSet {
  public:
    constexpr ClassSet() = default;
    constexpr ClassSet(std::initializer_list<int> ids) {
        for (int id : ids) add(id);
    }
    static constexpr ClassSet from_mask(std::uint8_t m) {
        ClassSet s;
        s.bits_ = m;
        return s;
    }

    constexpr void add(int id) { bits_ |= static_cast<std::uint8_t>(1u << id); }
    constexpr bool contains(int id) const { return (bits_ >> id) & 1u; }
    constexpr int size() const { return __builtin_popcount(bits_); }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::uint8_t mask() const { return bits_; }

    constexpr bool contains_all(ClassSet other) const {
        return (bits_ & other.bits_) == other.bits_;
    }

    std::vector<int> ids() const {
        std::vector<int> out;
        for (int i = 0; i < kNumClasses; ++i)
            if (contains(i)) out.push_back(i);
        return out;
    }

    friend constexpr ClassSet operator|(ClassSet a, ClassSet b) {
        return from_mask(a.bits_ | b.bits_);
    }
    friend constexpr ClassSet operator&(ClassSet a, ClassSet b) {
        return from_mask(a.bits_ & b.bits_);
    }
    friend bool operator==(const ClassSet&, const ClassSet&) = default;

  private:
    std::uint8_t bits_ = 0;
};

/// Per-agent partition of the 8 classes into always / conditionally /
/// never traversable terrain.
struct AgentTiers {
    ClassSet always;
    ClassSet conditional;
    ClassSet never;
};

struct ScenarioConfig {
    Agent agent = Agent::Pedestrian;
    Objective objective = Objective::Fastest;
    int start_class = 0;
    int end_class = 0;
    ClassSet allowed;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Paired traversability (binary) and preference (dense tiers, higher =
/// preferred, 0 = not traversable) vectors over the 8 classes.
struct ConstraintVectors {
    std::array<std::uint8_t, kNumClasses> trav{};
    std::array<std::uint8_t, kNumClasses> pref{};

    friend bool operator==(const ConstraintVectors&, const ConstraintVectors&) = default;
};

/// Remaps pref values on trav=1 positions to dense tiers 1..T, preserving
/// order and ties; trav=0 positions are forced to 0. Idempotent.
std::array<std::uint8_t, kNumClasses> canonicalize_pref(
    std::span<const std::uint8_t, kNumClasses> raw_pref,
    std::span<const std::uint8_t, kNumClasses> trav);

/// The fixed symbolic knowledge base: land-cover classes, agent
/// traversability tiers and per-(agent, objective) priority rankings.
/// Immutable; safe to share across threads.
class KnowledgeBase {
  public:
    static const KnowledgeBase& instance();

    const AgentTiers& tiers(Agent a) const;

    /// Priority ranking as dense tiers over the agent's T_A + T_C classes
    /// (0 on T_N classes). Higher value = higher priority.
    const std::array<std::uint8_t, kNumClasses>& ranking(Agent a, Objective o) const;

    /// Derives ground-truth vectors for a scenario. Throws KbViolationError
    /// if allowed_classes names a T_N class or start/end lie outside it.
    ConstraintVectors derive_vectors(const ScenarioConfig& config) const;

    /// Versioned JSON document (classes, agent tiers, ranking rows) used
    /// for golden-file comparison.
    nlohmann::ordered_json to_json() const;

  private:
    KnowledgeBase();
    std::array<AgentTiers, kNumAgents> tiers_;
    std::array<std::array<std::array<std::uint8_t, kNumClasses>, kNumObjectives>, kNumAgents>
        rankings_;
};

}  // namespace routebench::kb
