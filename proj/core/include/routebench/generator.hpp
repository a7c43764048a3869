#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "routebench/costmap.hpp"
#include "routebench/kb.hpp"
#include "routebench/mask.hpp"
#include "routebench/planner.hpp"
#include "routebench/region_graph.hpp"
#include "routebench/rng.hpp"
#include "routebench/stratify.hpp"

namespace routebench::gen {

/// A synthesized natural-language query plus the scenario it encodes and
/// the KB-derived ground-truth vectors. gt is always exactly
/// derive_vectors(config); the synthesis loop enforces this.
struct QuerySpec {
    kb::ScenarioConfig config;
    std::string text;
    kb::ConstraintVectors gt;
};

/// One benchmark item. Fields beyond `query` are populated per task level:
/// region/vector ground truth for tasks 2-3, endpoints and the optimal
/// trajectory for task 3.
struct TaskSample {
    std::string sample_id;
    int task = 1;
    QuerySpec query;
    std::string mask_ref;          // empty for task 1
    std::uint64_t mask_hash = 0;

    std::array<int, kb::kNumClasses> region_vector{};  // 0 = absent
    kb::ConstraintVectors vectors;  // gt restricted to classes present in the mask
    int class_count = 0;            // tasks 2-3: number of classes in the mask
    int fill_min_area = 64;         // majority-fill threshold the mask was prepared with

    PixelCoord start{};
    PixelCoord end{};
    std::vector<PixelCoord> trajectory;  // dense optimal path, start..end
    std::uint64_t path_cost = 0;
    strat::ComplexityBreakdown complexity;  // task 3
    std::optional<strat::Tier> tier;
};

struct GenerationResult {
    std::string text;
    kb::ConstraintVectors vectors;  // backend's self-inferred vectors
};

/// Pluggable text generator. generate() must return the backend's own
/// reading of its text (self-inference); synthesize_query only accepts the
/// text when that reading matches the KB derivation and verify() agrees.
class TextGeneratorPort {
  public:
    virtual ~TextGeneratorPort() = default;
    virtual GenerationResult generate(const kb::ScenarioConfig& config) = 0;
    virtual bool verify(const std::string& text) = 0;
};

/// Offline deterministic backend: renders a fixed English description of
/// the scenario straight from the KB, so it is accepted on the first
/// attempt by construction.
class TemplateBackend final : public TextGeneratorPort {
  public:
    GenerationResult generate(const kb::ScenarioConfig& config) override;
    bool verify(const std::string& text) override;
};

/// Out-of-process backend speaking JSON over HTTP (POST /generate and
/// POST /verify). The base URL typically comes from ROUTEBENCH_BACKEND_URL.
class HttpBackend final : public TextGeneratorPort {
  public:
    explicit HttpBackend(std::string base_url);
    ~HttpBackend() override;
    GenerationResult generate(const kb::ScenarioConfig& config) override;
    bool verify(const std::string& text) override;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Uniformly samples agent and objective, then allowed classes as the
/// agent's T_A plus a random subset of T_C, and start/end classes from the
/// allowed set. Deterministic for a given stream state.
kb::ScenarioConfig sample_config(RngStream& rng, const kb::KnowledgeBase& kb);

/// generate -> self-check -> verify loop. Returns the first accepted text;
/// throws GenerationFailedError after max_retries rejected attempts. The
/// number of attempts made is reported through attempt_count when non-null.
QuerySpec synthesize_query(const kb::ScenarioConfig& config, TextGeneratorPort& port,
                           const kb::KnowledgeBase& kb, int max_retries,
                           int* attempt_count = nullptr);

TaskSample make_task1(const QuerySpec& query, std::string sample_id);

/// Task 2 grounding. Throws IncompatibleMaskError when the mask's classes
/// do not cover the query's.
TaskSample make_task2(const QuerySpec& query, const mask::SemanticMask& mask,
                      const mask::RegionCatalog& catalog, std::string sample_id,
                      std::string mask_ref);

/// Task 3 assembly: cost map, endpoint selection, optimal trajectory.
/// Returns nullopt (skip) when the chosen endpoints are pixel-unreachable;
/// throws NoValidPairError when no region pair matches at all.
std::optional<TaskSample> make_task3(const QuerySpec& query, const mask::SemanticMask& mask,
                                     const mask::RegionCatalog& catalog,
                                     const graph::RegionGraph& graph, std::uint64_t rng_seed,
                                     std::string sample_id, std::string mask_ref);

enum class TaskSelect : std::uint8_t { Task1 = 1, Task2 = 2, Task3 = 3, All = 0 };

struct GenerateOptions {
    std::vector<std::string> mask_paths;
    TaskSelect task = TaskSelect::All;
    std::uint64_t seed = 0;
    int per_mask = 3;          // scenario draws per mask
    int min_area = 64;         // majority_fill threshold
    int core_depth = 2;        // erosion iterations
    int max_retries = 5;       // query synthesis budget
    int config_resamples = 32; // draws before giving up on a compatible config
    int jobs = 0;              // 0 = hardware concurrency
    strat::Lambdas lambdas;
    std::string dump_graph_dir;  // when set, write per-mask adjacency JSON
};

struct RunReport {
    int masks_processed = 0;
    int samples_emitted = 0;
    int task3_skips_unreachable = 0;
    int config_skips_incompatible = 0;
    std::array<int, 4> per_task_counts{};  // index 1..3 used
};

/// Full batch generation over a mask set. Sample streams are forked from
/// (seed, mask index, slot), and per-mask results are merged in input
/// order, so output is byte-stable for a given seed regardless of the
/// worker count. Task 3 tiers are calibrated on the emitted batch with
/// 0.60/0.85 quantile thresholds.
std::vector<TaskSample> generate_batch(const GenerateOptions& options, TextGeneratorPort& port,
                                       RunReport* report = nullptr);

}  // namespace routebench::gen
