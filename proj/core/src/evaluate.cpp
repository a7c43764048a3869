#include "routebench/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace routebench::eval {

double score_tm(const std::vector<std::array<std::uint8_t, kb::kNumClasses>>& preds,
                const std::vector<std::array<std::uint8_t, kb::kNumClasses>>& gts) {
    if (preds.size() != gts.size()) throw Error("score_tm: batch length mismatch");
    if (preds.empty()) throw Error("score_tm: empty batch");
    int hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) hits += preds[i] == gts[i];
    return static_cast<double>(hits) / preds.size();
}

std::optional<double> score_pr(const std::array<std::uint8_t, kb::kNumClasses>& pred_pref,
                               const std::array<std::uint8_t, kb::kNumClasses>& gt_pref,
                               const std::array<std::uint8_t, kb::kNumClasses>& gt_trav) {
    std::vector<int> idx;
    for (int i = 0; i < kb::kNumClasses; ++i)
        if (gt_trav[i]) idx.push_back(i);
    const int m = static_cast<int>(idx.size());
    if (m < 2) return std::nullopt;

    int concordant = 0, discordant = 0;
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            const int gt_diff = static_cast<int>(gt_pref[idx[a]]) - gt_pref[idx[b]];
            const int pred_diff = static_cast<int>(pred_pref[idx[a]]) - pred_pref[idx[b]];
            if (gt_diff == 0 && pred_diff == 0)
                ++concordant;  // agreement on the tie
            else if (gt_diff == 0 || pred_diff == 0)
                ;  // tied in exactly one ranking: neither
            else if ((gt_diff > 0) == (pred_diff > 0))
                ++concordant;
            else
                ++discordant;
        }
    }
    const double pairs = m * (m - 1) / 2.0;
    return (concordant - discordant) / pairs;
}

double score_fm(const std::vector<kb::ConstraintVectors>& preds,
                const std::vector<kb::ConstraintVectors>& gts) {
    if (preds.size() != gts.size()) throw Error("score_fm: batch length mismatch");
    if (preds.empty()) throw Error("score_fm: empty batch");
    int hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i].trav != gts[i].trav) continue;
        const auto pred_canon = kb::canonicalize_pref(preds[i].pref, preds[i].trav);
        const auto gt_canon = kb::canonicalize_pref(gts[i].pref, gts[i].trav);
        hits += pred_canon == gt_canon;
    }
    return static_cast<double>(hits) / preds.size();
}

double score_rm(const std::vector<std::array<int, kb::kNumClasses>>& preds,
                const std::vector<std::array<int, kb::kNumClasses>>& gts) {
    if (preds.size() != gts.size()) throw Error("score_rm: batch length mismatch");
    if (preds.empty()) throw Error("score_rm: empty batch");
    int hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
        for (int k = 0; k < kb::kNumClasses; ++k) hits += preds[i][k] == gts[i][k];
    return static_cast<double>(hits) / (preds.size() * kb::kNumClasses);
}

bool classify_adherence(const std::vector<PixelCoord>& waypoints, const plan::CostMap& map) {
    if (waypoints.empty()) return false;
    for (const PixelCoord& p : waypoints)
        if (!map.finite(p)) return false;
    return true;
}

namespace {

constexpr double kEdtInf = 1e30;

// 1-D squared distance transform (lower envelope of parabolas).
void edt_pass(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
              std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    int k = 0;
    v[0] = 0;
    z[0] = -kEdtInf;
    z[1] = kEdtInf;
    for (int q = 1; q < n; ++q) {
        double s = ((f[q] + q * static_cast<double>(q)) -
                    (f[v[k]] + v[k] * static_cast<double>(v[k]))) /
                   (2.0 * q - 2.0 * v[k]);
        while (s <= z[k]) {
            --k;
            s = ((f[q] + q * static_cast<double>(q)) -
                 (f[v[k]] + v[k] * static_cast<double>(v[k]))) /
                (2.0 * q - 2.0 * v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kEdtInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - static_cast<double>(v[k]);
        d[q] = dq * dq + f[v[k]];
    }
}

// Exact squared Euclidean distance field to the target point set, over the
// grid [min_row..max_row] x [min_col..max_col].
std::vector<double> edt_field(const std::vector<PixelCoord>& targets, int min_row, int min_col,
                              int rows, int cols) {
    std::vector<double> grid(static_cast<std::size_t>(rows) * cols, kEdtInf);
    for (const PixelCoord& p : targets)
        grid[static_cast<std::size_t>(p.row - min_row) * cols + (p.col - min_col)] = 0.0;

    const int max_dim = std::max(rows, cols);
    std::vector<double> f(max_dim), d(max_dim), z(max_dim + 1);
    std::vector<int> v(max_dim);

    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) f[c] = grid[static_cast<std::size_t>(r) * cols + c];
        f.resize(cols);
        edt_pass(f, d, v, z);
        for (int c = 0; c < cols; ++c) grid[static_cast<std::size_t>(r) * cols + c] = d[c];
        f.resize(max_dim);
    }
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) f[r] = grid[static_cast<std::size_t>(r) * cols + c];
        f.resize(rows);
        edt_pass(f, d, v, z);
        for (int r = 0; r < rows; ++r) grid[static_cast<std::size_t>(r) * cols + c] = d[r];
        f.resize(max_dim);
    }
    return grid;
}

double directed_mean_nn(const std::vector<PixelCoord>& from, const std::vector<PixelCoord>& to) {
    // Brute force when cheap, grid distance transform otherwise.
    if (from.size() * to.size() <= 1u << 22) {
        double total = 0.0;
        for (const PixelCoord& p : from) {
            double best = kEdtInf;
            for (const PixelCoord& q : to) {
                const double dr = static_cast<double>(p.row) - q.row;
                const double dc = static_cast<double>(p.col) - q.col;
                best = std::min(best, dr * dr + dc * dc);
            }
            total += std::sqrt(best);
        }
        return total / from.size();
    }

    int min_row = to.front().row, max_row = to.front().row;
    int min_col = to.front().col, max_col = to.front().col;
    for (const auto& set : {std::cref(from), std::cref(to)}) {
        for (const PixelCoord& p : set.get()) {
            min_row = std::min(min_row, p.row);
            max_row = std::max(max_row, p.row);
            min_col = std::min(min_col, p.col);
            max_col = std::max(max_col, p.col);
        }
    }
    const int rows = max_row - min_row + 1;
    const int cols = max_col - min_col + 1;
    const auto field = edt_field(to, min_row, min_col, rows, cols);
    double total = 0.0;
    for (const PixelCoord& p : from)
        total += std::sqrt(
            field[static_cast<std::size_t>(p.row - min_row) * cols + (p.col - min_col)]);
    return total / from.size();
}

}  // namespace

double chamfer_distance(const std::vector<PixelCoord>& a, const std::vector<PixelCoord>& b) {
    if (a.empty() || b.empty()) throw Error("chamfer_distance: empty path");
    return (directed_mean_nn(a, b) + directed_mean_nn(b, a)) / 2.0;
}

namespace {

int traversable_count(const std::array<std::uint8_t, kb::kNumClasses>& trav) {
    int m = 0;
    for (std::uint8_t t : trav) m += t != 0;
    return m;
}

void accumulate_vector_scores(MetricBlock& block, const gen::TaskSample& sample,
                              const CandidateAnswer* answer, PerSampleRecord* record) {
    const kb::ConstraintVectors& gt = sample.task == 1 ? sample.query.gt : sample.vectors;

    double tm = 0.0, fm = 0.0;
    std::optional<double> pr, rm;
    if (answer) {
        kb::ConstraintVectors pred;
        pred.trav = answer->pred_trav;
        pred.pref = answer->pred_pref;
        tm = pred.trav == gt.trav ? 1.0 : 0.0;
        fm = score_fm({pred}, {gt});
        pr = score_pr(pred.pref, gt.pref, gt.trav);
        if (sample.task == 2) rm = score_rm({answer->pred_region}, {sample.region_vector});
    } else {
        // Missing answer: worst case on every defined metric.
        if (traversable_count(gt.trav) >= 2) pr = -1.0;
        if (sample.task == 2) rm = 0.0;
    }

    block.samples += 1;
    block.missing_answers += answer ? 0 : 1;
    block.tm.add(tm);
    block.fm.add(fm);
    if (pr)
        block.pr.add(*pr);
    else
        block.pr_excluded += 1;
    if (rm) block.rm.add(*rm);

    if (record) {
        record->tm = tm;
        record->fm = fm;
        record->pr = pr;
        record->rm = rm;
    }
}

}  // namespace

EvalReport evaluate(const std::vector<gen::TaskSample>& samples,
                    const std::vector<CandidateAnswer>& answers,
                    const std::function<mask::SemanticMask(const gen::TaskSample&)>& mask_loader,
                    std::vector<PerSampleRecord>* per_sample) {
    std::unordered_map<std::string, const CandidateAnswer*> by_id;
    for (const CandidateAnswer& a : answers) by_id[a.sample_id] = &a;

    EvalReport report;
    for (const gen::TaskSample& sample : samples) {
        const CandidateAnswer* answer = nullptr;
        if (auto it = by_id.find(sample.sample_id); it != by_id.end()) answer = it->second;

        PerSampleRecord record;
        record.sample_id = sample.sample_id;
        record.task = sample.task;
        record.tier = sample.tier;

        TaskSection& section = report.section(sample.task);
        std::vector<MetricBlock*> blocks{&section.overall};
        if (sample.tier) blocks.push_back(&section.per_tier[*sample.tier]);

        if (sample.task == 1 || sample.task == 2) {
            for (MetricBlock* block : blocks)
                accumulate_vector_scores(*block, sample, answer,
                                         block == blocks.front() ? &record : nullptr);
        } else {
            const mask::SemanticMask m = mask_loader(sample);
            const plan::CostMap cost_map = plan::build_cost_map(m, sample.vectors);

            Task3SampleScore score;
            score.sample_id = sample.sample_id;
            score.tier = sample.tier;

            // Waypoints far outside the scene are treated like a missing
            // answer; moderately out-of-bounds ones are legal and scored.
            const auto in_expanded_box = [&](PixelCoord p) {
                return p.row >= -m.height && p.row < 2 * m.height && p.col >= -m.width &&
                       p.col < 2 * m.width;
            };
            std::vector<PixelCoord> waypoints;
            if (answer && !answer->waypoints.empty() &&
                std::all_of(answer->waypoints.begin(), answer->waypoints.end(), in_expanded_box)) {
                waypoints = answer->waypoints;
            } else {
                waypoints = {sample.start};
                score.missing_answer = true;
            }

            score.compliant = !score.missing_answer && classify_adherence(waypoints, cost_map);
            const plan::DensePath dense =
                plan::reconstruct_dense(waypoints, cost_map, score.compliant);

            if (score.compliant && dense.used_line_fallback()) score.disconnected = true;
            if (score.compliant && !score.disconnected) {
                std::uint64_t dense_cost = 0;
                for (const PixelCoord& p : dense.pixels) dense_cost += cost_map.at(p);
                score.cost_ratio =
                    static_cast<double>(dense_cost) / static_cast<double>(sample.path_cost);
            }
            if (!score.compliant) {
                int violating = 0;
                for (const PixelCoord& p : dense.pixels) violating += !cost_map.finite(p);
                score.violation_ratio = static_cast<double>(violating) / dense.pixels.size();
            }
            score.chamfer = chamfer_distance(dense.pixels, sample.trajectory);

            for (MetricBlock* block : blocks) {
                block->samples += 1;
                block->missing_answers += score.missing_answer ? 1 : 0;
                block->ar.add(score.compliant ? 1.0 : 0.0);
                if (score.compliant) {
                    if (score.disconnected)
                        block->disconnected += 1;
                    else
                        block->cr.add(score.cost_ratio);
                } else {
                    block->vr.add(score.violation_ratio);
                }
                block->cd.add(score.chamfer);
            }
            report.task3_details.push_back(score);
            record.task3 = score;
        }
        if (per_sample) per_sample->push_back(std::move(record));
    }
    return report;
}

namespace {

nlohmann::ordered_json metric_json(const MetricAccumulator& acc) {
    if (acc.count == 0) return nullptr;
    return *acc.mean();
}

nlohmann::ordered_json block_to_json(const MetricBlock& b, int task) {
    nlohmann::ordered_json out;
    out["samples"] = b.samples;
    if (task <= 2) {
        out["tm"] = metric_json(b.tm);
        out["pr"] = metric_json(b.pr);
        out["pr_excluded"] = b.pr_excluded;
    }
    if (task == 1) out["fm"] = metric_json(b.fm);
    if (task == 2) out["rm"] = metric_json(b.rm);
    if (task == 3) {
        out["ar"] = metric_json(b.ar);
        out["cr"] = metric_json(b.cr);
        out["vr"] = metric_json(b.vr);
        out["cd"] = metric_json(b.cd);
        out["disconnected_count"] = b.disconnected;
    }
    out["missing_answers"] = b.missing_answers;
    return out;
}

nlohmann::ordered_json section_to_json(const TaskSection& s, int task) {
    nlohmann::ordered_json out;
    out["avg_pooled"] = block_to_json(s.overall, task);

    nlohmann::ordered_json tiers;
    std::array<MetricAccumulator, 8> tier_means;  // tm, pr, fm, rm, ar, cr, vr, cd
    for (const auto& [tier, block] : s.per_tier) {
        tiers[strat::tier_name(tier)] = block_to_json(block, task);
        const MetricAccumulator* accs[8] = {&block.tm, &block.pr, &block.fm, &block.rm,
                                            &block.ar, &block.cr, &block.vr, &block.cd};
        for (int i = 0; i < 8; ++i)
            if (auto mean = accs[i]->mean()) tier_means[i].add(*mean);
    }
    out["tiers"] = std::move(tiers);

    static const char* const kNames[8] = {"tm", "pr", "fm", "rm", "ar", "cr", "vr", "cd"};
    nlohmann::ordered_json avg_tiers;
    for (int i = 0; i < 8; ++i)
        if (auto mean = tier_means[i].mean()) avg_tiers[kNames[i]] = *mean;
    out["avg_of_tiers"] = std::move(avg_tiers);
    return out;
}

}  // namespace

nlohmann::ordered_json report_to_json(const EvalReport& report) {
    nlohmann::ordered_json out;
    out["schema_version"] = 1;
    out["task1"] = section_to_json(report.task1, 1);
    out["task2"] = section_to_json(report.task2, 2);
    out["task3"] = section_to_json(report.task3, 3);
    return out;
}

std::string report_summary(const EvalReport& report) {
    std::ostringstream os;
    os.precision(4);
    auto line = [&](const char* label, const MetricAccumulator& acc) {
        os << "  " << label << ": ";
        if (auto mean = acc.mean())
            os << *mean;
        else
            os << "undefined";
        os << '\n';
    };
    if (report.task1.overall.samples) {
        os << "Task 1 (" << report.task1.overall.samples << " samples)\n";
        line("TM", report.task1.overall.tm);
        line("PR", report.task1.overall.pr);
        line("FM", report.task1.overall.fm);
    }
    if (report.task2.overall.samples) {
        os << "Task 2 (" << report.task2.overall.samples << " samples)\n";
        line("RM", report.task2.overall.rm);
        line("TM", report.task2.overall.tm);
        line("PR", report.task2.overall.pr);
    }
    if (report.task3.overall.samples) {
        os << "Task 3 (" << report.task3.overall.samples << " samples)\n";
        line("AR", report.task3.overall.ar);
        line("CR", report.task3.overall.cr);
        line("VR", report.task3.overall.vr);
        line("CD", report.task3.overall.cd);
        os << "  disconnected: " << report.task3.overall.disconnected
           << ", missing: " << report.task3.overall.missing_answers << '\n';
    }
    return os.str();
}

}  // namespace routebench::eval
