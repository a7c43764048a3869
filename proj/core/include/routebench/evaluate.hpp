#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "routebench/generator.hpp"
#include "routebench/planner.hpp"

#include <nlohmann/json_fwd.hpp>

namespace routebench::eval {

/// A model's parsed output for one sample. Waypoint coordinates may be out
/// of bounds at parse time; scoring penalizes them.
struct CandidateAnswer {
    std::string sample_id;
    int task = 0;
    std::array<std::uint8_t, kb::kNumClasses> pred_trav{};
    std::array<std::uint8_t, kb::kNumClasses> pred_pref{};
    std::array<int, kb::kNumClasses> pred_region{};
    std::vector<PixelCoord> waypoints;
};

/// Fraction of samples whose predicted traversability vector matches the
/// ground truth exactly. Throws Error on batch length mismatch.
double score_tm(const std::vector<std::array<std::uint8_t, kb::kNumClasses>>& preds,
                const std::vector<std::array<std::uint8_t, kb::kNumClasses>>& gts);

/// Kendall tau over the M = ||gt_trav||_1 traversable classes: concordant
/// minus discordant pairs over C(M,2). A pair tied in both rankings counts
/// as concordant; tied in only one counts as neither. nullopt when M < 2.
std::optional<double> score_pr(const std::array<std::uint8_t, kb::kNumClasses>& pred_pref,
                               const std::array<std::uint8_t, kb::kNumClasses>& gt_pref,
                               const std::array<std::uint8_t, kb::kNumClasses>& gt_trav);

/// Fraction of samples matching both vectors; preferences are compared in
/// canonical dense-tier form, so equivalent tierings count as equal.
double score_fm(const std::vector<kb::ConstraintVectors>& preds,
                const std::vector<kb::ConstraintVectors>& gts);

/// Element-wise region-id accuracy over N * L entries.
double score_rm(const std::vector<std::array<int, kb::kNumClasses>>& preds,
                const std::vector<std::array<int, kb::kNumClasses>>& gts);

/// Compliant iff every waypoint is in bounds with finite cost.
bool classify_adherence(const std::vector<PixelCoord>& waypoints, const plan::CostMap& map);

struct Task3SampleScore {
    std::string sample_id;
    bool compliant = false;
    bool missing_answer = false;   // no/unusable answer; forced non-compliant
    bool disconnected = false;     // compliant but a leg fell back to Line
    double cost_ratio = 0.0;       // compliant, connected samples only
    double violation_ratio = 0.0;  // non-compliant samples only
    double chamfer = 0.0;
    std::optional<strat::Tier> tier;
};

struct MetricAccumulator {
    double sum = 0.0;
    int count = 0;

    void add(double v) {
        sum += v;
        ++count;
    }
    std::optional<double> mean() const {
        if (count == 0) return std::nullopt;
        return sum / count;
    }
};

/// Aggregates for one slice (a tier or the pooled batch).
struct MetricBlock {
    MetricAccumulator tm, pr, fm, rm, ar, cr, vr, cd;
    int samples = 0;
    int pr_excluded = 0;      // M < 2
    int disconnected = 0;     // compliant samples excluded from CR
    int missing_answers = 0;
};

struct TaskSection {
    MetricBlock overall;  // pooled over all the task's samples; headline "Avg"
    std::map<strat::Tier, MetricBlock> per_tier;
};

struct EvalReport {
    TaskSection task1, task2, task3;
    std::vector<Task3SampleScore> task3_details;

    const TaskSection& section(int task) const {
        return task == 1 ? task1 : task == 2 ? task2 : task3;
    }
    TaskSection& section(int task) {
        return task == 1 ? task1 : task == 2 ? task2 : task3;
    }
};

struct PerSampleRecord {
    std::string sample_id;
    int task = 0;
    std::optional<strat::Tier> tier;
    std::optional<double> tm, pr, fm, rm;
    std::optional<Task3SampleScore> task3;
};

/// Scores every sample against its answer (answers keyed by sample_id).
/// Missing or malformed answers never abort the run: vector tasks score 0,
/// task 3 scores as a degenerate single-waypoint path at S, all tallied.
/// `mask_loader` resolves a sample's mask_ref to the mask (task 3 only).
EvalReport evaluate(const std::vector<gen::TaskSample>& samples,
                    const std::vector<CandidateAnswer>& answers,
                    const std::function<mask::SemanticMask(const gen::TaskSample&)>& mask_loader,
                    std::vector<PerSampleRecord>* per_sample = nullptr);

nlohmann::ordered_json report_to_json(const EvalReport& report);
std::string report_summary(const EvalReport& report);

/// Symmetric chamfer distance between two pixel paths: the mean of the two
/// directed mean nearest-neighbor distances.
double chamfer_distance(const std::vector<PixelCoord>& a, const std::vector<PixelCoord>& b);

}  // namespace routebench::eval
