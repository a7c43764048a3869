#include "routebench/generator.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "routebench/mask_io.hpp"
#include "routebench/serialization.hpp"

namespace routebench::gen {

kb::ScenarioConfig sample_config(RngStream& rng, const kb::KnowledgeBase& kb) {
    kb::ScenarioConfig cfg;
    cfg.agent = static_cast<kb::Agent>(rng.bounded(kb::kNumAgents));
    cfg.objective = static_cast<kb::Objective>(rng.bounded(kb::kNumObjectives));

    const kb::AgentTiers& tiers = kb.tiers(cfg.agent);
    cfg.allowed = tiers.always;
    for (int id : tiers.conditional.ids())
        if (rng.coin()) cfg.allowed.add(id);

    const auto ids = cfg.allowed.ids();
    cfg.start_class = ids[rng.bounded(ids.size())];
    cfg.end_class = ids[rng.bounded(ids.size())];
    return cfg;
}

QuerySpec synthesize_query(const kb::ScenarioConfig& config, TextGeneratorPort& port,
                           const kb::KnowledgeBase& kb, int max_retries, int* attempt_count) {
    const kb::ConstraintVectors gt = kb.derive_vectors(config);
    for (int attempt = 1; attempt <= max_retries; ++attempt) {
        GenerationResult generated = port.generate(config);
        if (generated.vectors != gt) continue;  // self-inference disagrees with the KB
        if (!port.verify(generated.text)) continue;
        if (attempt_count) *attempt_count = attempt;
        return QuerySpec{config, std::move(generated.text), gt};
    }
    throw GenerationFailedError("no compliant query after " + std::to_string(max_retries) +
                                " attempts");
}

TaskSample make_task1(const QuerySpec& query, std::string sample_id) {
    TaskSample sample;
    sample.sample_id = std::move(sample_id);
    sample.task = 1;
    sample.query = query;
    sample.vectors = query.gt;
    return sample;
}

namespace {

// Ground truth restricted to the classes visible in the mask, re-tiered
// densely. With a compatible mask this equals the full vectors, since
// every allowed class is present.
kb::ConstraintVectors restrict_to_present(const kb::ConstraintVectors& gt,
                                          kb::ClassSet present) {
    kb::ConstraintVectors out;
    for (int i = 0; i < kb::kNumClasses; ++i)
        out.trav[i] = static_cast<std::uint8_t>(gt.trav[i] && present.contains(i));
    out.pref = kb::canonicalize_pref(gt.pref, out.trav);
    return out;
}

}  // namespace

TaskSample make_task2(const QuerySpec& query, const mask::SemanticMask& m,
                      const mask::RegionCatalog& catalog, std::string sample_id,
                      std::string mask_ref) {
    const kb::ClassSet present = m.class_set();
    if (!mask::compatible(present, query.config))
        throw IncompatibleMaskError("mask classes do not cover the query's allowed classes");

    TaskSample sample;
    sample.sample_id = std::move(sample_id);
    sample.task = 2;
    sample.query = query;
    sample.mask_ref = std::move(mask_ref);
    sample.mask_hash = m.content_hash();
    for (int i = 0; i < kb::kNumClasses; ++i)
        sample.region_vector[i] = catalog.per_class_primary[i];
    sample.vectors = restrict_to_present(query.gt, present);
    sample.class_count = present.size();
    sample.tier = strat::task2_tier(sample.class_count);
    return sample;
}

std::optional<TaskSample> make_task3(const QuerySpec& query, const mask::SemanticMask& m,
                                     const mask::RegionCatalog& catalog,
                                     const graph::RegionGraph& graph, std::uint64_t rng_seed,
                                     std::string sample_id, std::string mask_ref) {
    TaskSample sample = make_task2(query, m, catalog, std::move(sample_id), std::move(mask_ref));
    sample.task = 3;
    sample.tier.reset();  // task 3 tiers come from complexity calibration

    const graph::EndpointPair endpoints =
        graph::select_endpoints(graph, catalog, query.gt, query.config, rng_seed);
    const plan::CostMap cost_map = plan::build_cost_map(m, query.gt);
    const auto planned = plan::astar(cost_map, endpoints.start_pixel, endpoints.end_pixel);
    if (!planned) return std::nullopt;  // region-reachable but pixel-disconnected

    sample.start = endpoints.start_pixel;
    sample.end = endpoints.end_pixel;
    sample.trajectory = planned->path.waypoints;
    sample.path_cost = planned->total_cost;
    return sample;
}

namespace {

struct MaskOutcome {
    std::vector<TaskSample> samples;
    int task3_skips = 0;
    int config_skips = 0;
};

std::string mask_stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

MaskOutcome process_mask(const GenerateOptions& options, TextGeneratorPort& port,
                         std::size_t mask_index) {
    const auto& kbase = kb::KnowledgeBase::instance();
    const std::string& path = options.mask_paths[mask_index];
    const mask::SemanticMask filled =
        mask::majority_fill(mask::load_mask(path), options.min_area);
    const mask::RegionCatalog catalog = mask::extract_regions(filled, options.core_depth);
    const kb::ClassSet present = filled.class_set();
    const std::string stem = mask_stem(path);

    if (!options.dump_graph_dir.empty()) {
        kb::ConstraintVectors all_on;
        all_on.trav.fill(1);
        all_on.pref.fill(1);
        const graph::RegionGraph g = graph::build_graph(catalog, filled, all_on);
        std::ofstream out(std::filesystem::path(options.dump_graph_dir) / (stem + ".graph.json"));
        out << graph_to_json(g, catalog).dump(2) << '\n';
    }

    const bool needs_mask = options.task != TaskSelect::Task1;
    MaskOutcome outcome;
    const RngStream mask_stream = RngStream(options.seed).fork(mask_index);

    for (int slot = 0; slot < options.per_mask; ++slot) {
        RngStream stream = mask_stream.fork(static_cast<std::uint64_t>(slot));

        kb::ScenarioConfig cfg;
        bool found = false;
        for (int draw = 0; draw < options.config_resamples; ++draw) {
            cfg = sample_config(stream, kbase);
            if (!needs_mask || mask::compatible(present, cfg)) {
                found = true;
                break;
            }
        }
        if (!found) {
            ++outcome.config_skips;
            continue;
        }

        const QuerySpec query = synthesize_query(cfg, port, kbase, options.max_retries);
        std::ostringstream id_base;
        id_base << stem << "-s" << slot;

        const auto want = [&](TaskSelect t) {
            return options.task == TaskSelect::All || options.task == t;
        };
        if (want(TaskSelect::Task1))
            outcome.samples.push_back(make_task1(query, id_base.str() + "-t1"));
        if (want(TaskSelect::Task2))
            outcome.samples.push_back(
                make_task2(query, filled, catalog, id_base.str() + "-t2", path));
        if (want(TaskSelect::Task3)) {
            const graph::RegionGraph g = graph::build_graph(catalog, filled, query.gt);
            try {
                auto sample = make_task3(query, filled, catalog, g, stream.next(),
                                         id_base.str() + "-t3", path);
                if (sample)
                    outcome.samples.push_back(std::move(*sample));
                else
                    ++outcome.task3_skips;
            } catch (const NoValidPairError&) {
                ++outcome.task3_skips;
            }
        }
    }

    // Scene complexity is a property of the mask; stamp it on the task 3
    // samples now, tier them after the whole batch is known.
    if (std::any_of(outcome.samples.begin(), outcome.samples.end(),
                    [](const TaskSample& s) { return s.task == 3; })) {
        kb::ConstraintVectors all_on;
        all_on.trav.fill(1);
        all_on.pref.fill(1);
        const graph::RegionGraph g = graph::build_graph(catalog, filled, all_on);
        const strat::ComplexityBreakdown breakdown =
            strat::complexity(catalog, g, options.lambdas);
        for (TaskSample& s : outcome.samples)
            if (s.task == 3) s.complexity = breakdown;
    }
    for (TaskSample& s : outcome.samples)
        if (s.task >= 2) s.fill_min_area = options.min_area;
    return outcome;
}

}  // namespace

std::vector<TaskSample> generate_batch(const GenerateOptions& options, TextGeneratorPort& port,
                                       RunReport* report) {
    const std::size_t n = options.mask_paths.size();
    std::vector<MaskOutcome> outcomes(n);
    std::vector<std::exception_ptr> failures(n);

    unsigned jobs = options.jobs > 0 ? static_cast<unsigned>(options.jobs)
                                     : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, std::max<std::size_t>(n, 1));

    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (std::size_t i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1)) {
            try {
                outcomes[i] = process_mask(options, port, i);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    if (jobs <= 1 || n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (std::size_t i = 0; i < n; ++i)
        if (failures[i]) std::rethrow_exception(failures[i]);

    std::vector<TaskSample> samples;
    RunReport run;
    for (std::size_t i = 0; i < n; ++i) {
        ++run.masks_processed;
        run.task3_skips_unreachable += outcomes[i].task3_skips;
        run.config_skips_incompatible += outcomes[i].config_skips;
        for (TaskSample& s : outcomes[i].samples) {
            ++run.per_task_counts[static_cast<std::size_t>(s.task)];
            samples.push_back(std::move(s));
        }
    }
    run.samples_emitted = static_cast<int>(samples.size());

    std::vector<double> scores;
    for (const TaskSample& s : samples)
        if (s.task == 3) scores.push_back(s.complexity.score);
    if (!scores.empty()) {
        const strat::TierThresholds thresholds = strat::quantile_thresholds(scores);
        for (TaskSample& s : samples)
            if (s.task == 3) s.tier = strat::task3_tier(s.complexity.score, thresholds);
    }

    if (report) *report = run;
    return samples;
}

}  // namespace routebench::gen
