#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <unordered_map>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "routebench/evaluate.hpp"
#include "routebench/generator.hpp"
#include "routebench/kb.hpp"
#include "routebench/mask_io.hpp"
#include "routebench/serialization.hpp"
#include "routebench/stratify.hpp"
#include "routebench/synthetic.hpp"

namespace fs = std::filesystem;
using namespace routebench;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr const char* kBackendUrlEnv = "ROUTEBENCH_BACKEND_URL";

// ---------------------------------------------------------------- generate

std::vector<std::string> collect_masks(const std::string& dir) {
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".png" || ext == ".nsrm") paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw Error(dir + ": no .png or .nsrm masks found");
    return paths;
}

std::unique_ptr<gen::TextGeneratorPort> make_backend(const std::string& backend,
                                                     std::string backend_url) {
    if (backend == "template") return std::make_unique<gen::TemplateBackend>();
    if (backend == "http") {
        if (backend_url.empty()) {
            if (const char* env = std::getenv(kBackendUrlEnv)) backend_url = env;
        }
        if (backend_url.empty())
            throw Error(std::string("http backend needs --backend-url or $") + kBackendUrlEnv);
        return std::make_unique<gen::HttpBackend>(std::move(backend_url));
    }
    throw Error("unknown backend: " + backend);
}

int cmd_generate(const std::string& masks_dir, const std::string& out_path,
                 const std::string& task, std::uint64_t seed, const std::string& backend,
                 const std::string& backend_url, int per_mask, int min_area, int core_depth,
                 int jobs, int max_retries, const std::string& dump_graph_dir) {
    gen::GenerateOptions options;
    options.mask_paths = collect_masks(masks_dir);
    options.seed = seed;
    options.per_mask = per_mask;
    options.min_area = min_area;
    options.core_depth = core_depth;
    options.jobs = jobs;
    options.max_retries = max_retries;
    options.dump_graph_dir = dump_graph_dir;
    if (task == "all")
        options.task = gen::TaskSelect::All;
    else if (task == "1")
        options.task = gen::TaskSelect::Task1;
    else if (task == "2")
        options.task = gen::TaskSelect::Task2;
    else if (task == "3")
        options.task = gen::TaskSelect::Task3;
    else
        throw Error("--task must be 1, 2, 3 or all");

    if (!dump_graph_dir.empty()) fs::create_directories(dump_graph_dir);
    const auto port = make_backend(backend, backend_url);
    gen::RunReport report;
    const auto samples = gen::generate_batch(options, *port, &report);
    io::write_samples_jsonl(out_path, samples);

    std::cout << "masks: " << report.masks_processed << "\n"
              << "samples: " << report.samples_emitted << " (task1 "
              << report.per_task_counts[1] << ", task2 " << report.per_task_counts[2]
              << ", task3 " << report.per_task_counts[3] << ")\n"
              << "skips: " << report.task3_skips_unreachable << " unreachable, "
              << report.config_skips_incompatible << " incompatible\n";
    return 0;
}

// ---------------------------------------------------------------- stratify

int cmd_stratify(const std::string& tasks_path, const std::string& lambdas_csv,
                 const std::string& thresholds_arg) {
    strat::Lambdas lambdas;
    if (!lambdas_csv.empty()) {
        std::istringstream is(lambdas_csv);
        std::string tok;
        for (int i = 0; i < 4; ++i) {
            if (!std::getline(is, tok, ',')) throw Error("--lambdas needs 4 comma-separated values");
            lambdas.w[i] = std::stod(tok);
        }
    }

    auto samples = io::read_samples_jsonl(tasks_path);
    std::vector<double> scores;
    for (gen::TaskSample& s : samples) {
        if (s.task == 2) s.tier = strat::task2_tier(s.class_count);
        if (s.task == 3) {
            s.complexity.lambdas = lambdas;
            s.complexity.score = lambdas.w[0] * s.complexity.h_inter +
                                 lambdas.w[1] * s.complexity.h_intra +
                                 lambdas.w[2] * s.complexity.h_count +
                                 lambdas.w[3] * s.complexity.c_topo;
            scores.push_back(s.complexity.score);
        }
    }

    if (!scores.empty()) {
        strat::TierThresholds thresholds;
        if (thresholds_arg == "auto") {
            thresholds = strat::quantile_thresholds(scores);
        } else {
            std::istringstream is(thresholds_arg);
            std::string t1, t2;
            if (!std::getline(is, t1, ',') || !std::getline(is, t2, ','))
                throw Error("--thresholds must be 'auto' or 't_easy,t_hard'");
            thresholds.easy = std::stod(t1);
            thresholds.hard = std::stod(t2);
            if (!(thresholds.easy < thresholds.hard))
                throw Error("--thresholds requires t_easy < t_hard");
        }
        for (gen::TaskSample& s : samples)
            if (s.task == 3) s.tier = strat::task3_tier(s.complexity.score, thresholds);
    }

    const std::string tmp = tasks_path + ".tmp";
    io::write_samples_jsonl(tmp, samples);
    fs::rename(tmp, tasks_path);

    std::map<int, std::map<std::string, int>> histogram;
    for (const gen::TaskSample& s : samples)
        if (s.tier) ++histogram[s.task][strat::tier_name(*s.tier)];
    for (const auto& [task, tiers] : histogram) {
        std::cout << "task " << task << ":";
        for (const char* name : {"Easy", "Medium", "Hard"}) {
            const auto it = tiers.find(name);
            std::cout << " " << name << "=" << (it == tiers.end() ? 0 : it->second);
        }
        std::cout << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------- evaluate

// Loads, verifies and majority-fills masks on demand, caching per path and
// fill threshold.
class MaskCache {
  public:
    explicit MaskCache(std::string root) : root_(std::move(root)) {}

    mask::SemanticMask operator()(const gen::TaskSample& sample) {
        const std::string resolved =
            root_.empty() ? sample.mask_ref : (fs::path(root_) / sample.mask_ref).string();
        const std::string key = resolved + "#" + std::to_string(sample.fill_min_area);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;

        mask::SemanticMask raw = mask::load_mask(resolved);
        if (raw.content_hash() != sample.mask_hash)
            throw Error(resolved + ": mask content hash mismatch for sample " + sample.sample_id);
        mask::SemanticMask filled = mask::majority_fill(raw, sample.fill_min_area);
        return cache_.emplace(key, std::move(filled)).first->second;
    }

  private:
    std::string root_;
    std::unordered_map<std::string, mask::SemanticMask> cache_;
};

int cmd_evaluate(const std::string& tasks_path, const std::string& answers_path,
                 const std::string& out_path, const std::string& per_sample_path,
                 const std::string& masks_root, const std::string& format) {
    const auto samples = io::read_samples_jsonl(tasks_path);
    const auto answers = io::read_answers_jsonl(answers_path);
    MaskCache loader(masks_root);

    std::vector<eval::PerSampleRecord> records;
    const eval::EvalReport report =
        eval::evaluate(samples, answers, std::ref(loader), &records);

    nlohmann::ordered_json doc = eval::report_to_json(report);
    doc["meta"] = nlohmann::ordered_json{{"tool_version", kVersion},
                                         {"tasks_file", tasks_path},
                                         {"answers_file", answers_path},
                                         {"sample_count", samples.size()},
                                         {"answer_count", answers.size()}};
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw Error(out_path + ": cannot open for writing");
        out << doc.dump(2) << '\n';
    }
    if (!per_sample_path.empty()) {
        std::ofstream out(per_sample_path, std::ios::binary);
        if (!out) throw Error(per_sample_path + ": cannot open for writing");
        for (const auto& rec : records) out << io::per_sample_to_json(rec).dump() << '\n';
    }

    if (format == "summary")
        std::cout << eval::report_summary(report);
    else if (format == "json")
        std::cout << doc.dump(2) << '\n';
    else if (format == "jsonl")
        for (const auto& rec : records) std::cout << io::per_sample_to_json(rec).dump() << '\n';
    else
        throw Error("--format must be json, jsonl or summary");
    return 0;
}

// ---------------------------------------------------------------- validate

int cmd_validate(int grids, int size, std::uint64_t seed) {
    RngStream root(seed);
    bool all_ok = true;

    // A-Star against the uninformed oracle on random workloads.
    int solved = 0, unreachable = 0, mismatches = 0;
    for (int i = 0; i < grids; ++i) {
        RngStream rng = root.fork(i);
        const double density = 0.4 * static_cast<double>(rng.bounded(1000)) / 1000.0;
        const plan::CostMap map = synthetic::random_cost_map(size, size, density, 3, rng);

        std::vector<PixelCoord> finite;
        for (int r = 0; r < map.height; ++r)
            for (int c = 0; c < map.width; ++c)
                if (map.at(r, c) != plan::CostMap::kInf) finite.push_back({r, c});
        if (finite.size() < 2) continue;
        const PixelCoord s = finite[rng.bounded(finite.size())];
        const PixelCoord e = finite[rng.bounded(finite.size())];

        const auto via_astar = plan::astar(map, s, e);
        const auto via_oracle = plan::dijkstra_cost(map, s, e);
        if (via_astar.has_value() != via_oracle.has_value() ||
            (via_astar && via_astar->total_cost != *via_oracle)) {
            ++mismatches;
            all_ok = false;
        } else if (via_astar) {
            ++solved;
        } else {
            ++unreachable;
        }
    }
    std::cout << "planner-optimality: " << (mismatches == 0 ? "PASS" : "FAIL") << " (" << solved
              << " solved, " << unreachable << " unreachable, " << mismatches << " mismatches)\n";

    // Euclidean heuristic admissibility against full oracle cost fields.
    const int adm_instances = std::min(grids, 50);
    const int adm_size = std::min(size, 32);
    int adm_violations = 0;
    for (int i = 0; i < adm_instances; ++i) {
        RngStream rng = root.fork(100000 + i);
        const double density = 0.4 * static_cast<double>(rng.bounded(1000)) / 1000.0;
        const plan::CostMap map = synthetic::random_cost_map(adm_size, adm_size, density, 3, rng);

        std::vector<PixelCoord> finite;
        for (int r = 0; r < map.height; ++r)
            for (int c = 0; c < map.width; ++c)
                if (map.at(r, c) != plan::CostMap::kInf) finite.push_back({r, c});
        if (finite.empty()) continue;
        const PixelCoord goal = finite[rng.bounded(finite.size())];
        const auto field = plan::dijkstra_field(map, goal);
        for (const PixelCoord& p : finite) {
            const std::uint64_t d = field[static_cast<std::size_t>(p.row) * map.width + p.col];
            if (d == plan::kUnreachableCost) continue;
            if (euclidean(p, goal) > static_cast<double>(d) + 1e-9) ++adm_violations;
        }
    }
    std::cout << "heuristic-admissibility: " << (adm_violations == 0 ? "PASS" : "FAIL") << " ("
              << adm_instances << " fields, " << adm_violations << " violations)\n";
    if (adm_violations > 0) all_ok = false;

    // Bresenham raster sanity over every endpoint pair on a small grid.
    int bres_failures = 0;
    for (int r0 = 0; r0 < 8; ++r0)
        for (int c0 = 0; c0 < 8; ++c0)
            for (int r1 = 0; r1 < 8; ++r1)
                for (int c1 = 0; c1 < 8; ++c1) {
                    const auto fwd = plan::bresenham({r0, c0}, {r1, c1});
                    auto rev = plan::bresenham({r1, c1}, {r0, c0});
                    std::reverse(rev.begin(), rev.end());
                    const std::size_t expect =
                        static_cast<std::size_t>(std::max(std::abs(r1 - r0), std::abs(c1 - c0))) + 1;
                    if (fwd != rev || fwd.size() != expect || fwd.front() != PixelCoord{r0, c0} ||
                        fwd.back() != PixelCoord{r1, c1})
                        ++bres_failures;
                }
    std::cout << "bresenham-raster: " << (bres_failures == 0 ? "PASS" : "FAIL") << " ("
              << bres_failures << " failures)\n";
    if (bres_failures > 0) all_ok = false;

    return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------- render

constexpr std::array<std::array<std::uint8_t, 3>, kb::kNumClasses> kClassPalette{{
    {150, 118, 84},   // Bareland
    {112, 168, 92},   // Rangeland
    {176, 176, 176},  // Developed space
    {70, 70, 70},     // Road
    {22, 98, 44},     // Tree
    {42, 88, 212},    // Water
    {196, 186, 64},   // Agriculture land
    {178, 52, 44},    // Building
}};
constexpr std::array<std::uint8_t, 3> kPathColor{255, 0, 255};
constexpr std::array<std::uint8_t, 3> kAnswerColor{255, 128, 0};
constexpr std::array<std::uint8_t, 3> kStartColor{255, 255, 0};
constexpr std::array<std::uint8_t, 3> kEndColor{0, 255, 255};

int cmd_render(const std::string& mask_path, const std::string& tasks_path,
               const std::string& sample_id, const std::string& answers_path,
               const std::string& masks_root, bool boundaries, const std::string& out_path) {
    std::optional<gen::TaskSample> sample;
    if (!tasks_path.empty()) {
        for (auto& s : io::read_samples_jsonl(tasks_path)) {
            if (s.sample_id == sample_id) {
                sample = std::move(s);
                break;
            }
        }
        if (!sample) throw Error(sample_id + ": not found in " + tasks_path);
        if (sample->task < 2) throw Error("render needs a task 2 or task 3 sample");
    }

    std::string resolved = mask_path;
    if (resolved.empty()) {
        if (!sample) throw Error("render needs --mask or --tasks with --sample-id");
        resolved = masks_root.empty() ? sample->mask_ref
                                      : (fs::path(masks_root) / sample->mask_ref).string();
    }
    mask::SemanticMask m = mask::load_mask(resolved);
    if (sample) m = mask::majority_fill(m, sample->fill_min_area);

    mask::RgbImage image;
    image.width = m.width;
    image.height = m.height;
    image.pixels.resize(static_cast<std::size_t>(m.width) * m.height * 3);
    for (int r = 0; r < m.height; ++r)
        for (int c = 0; c < m.width; ++c) image.set(r, c, kClassPalette[m.at(r, c)]);

    if (boundaries) {
        for (int r = 0; r < m.height; ++r)
            for (int c = 0; c < m.width; ++c) {
                const bool edge = (r + 1 < m.height && m.at(r + 1, c) != m.at(r, c)) ||
                                  (c + 1 < m.width && m.at(r, c + 1) != m.at(r, c));
                if (edge) image.set(r, c, {0, 0, 0});
            }
    }

    if (sample && sample->task == 3) {
        const plan::CostMap cost_map = plan::build_cost_map(m, sample->vectors);
        if (!answers_path.empty()) {
            for (const auto& answer : io::read_answers_jsonl(answers_path)) {
                if (answer.sample_id != sample->sample_id) continue;
                const bool compliant = eval::classify_adherence(answer.waypoints, cost_map);
                const auto dense = plan::reconstruct_dense(answer.waypoints, cost_map, compliant);
                for (const PixelCoord& p : dense.pixels)
                    if (m.in_bounds(p)) image.set(p.row, p.col, kAnswerColor);
                break;
            }
        }
        for (const PixelCoord& p : sample->trajectory)
            if (m.in_bounds(p)) image.set(p.row, p.col, kPathColor);
        if (m.in_bounds(sample->start))
            image.set(sample->start.row, sample->start.col, kStartColor);
        if (m.in_bounds(sample->end)) image.set(sample->end.row, sample->end.col, kEndColor);
    }

    mask::save_rgb_png(image, out_path);
    std::cout << "wrote " << out_path << " (" << image.width << "x" << image.height << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained route-planning benchmark generator and symbolic evaluator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "Generate task samples from mask rasters");
    std::string g_masks, g_out, g_task = "all", g_backend = "template", g_backend_url,
                g_dump_graph;
    std::uint64_t g_seed = 0;
    int g_per_mask = 3, g_min_area = 64, g_core_depth = 2, g_jobs = 0, g_max_retries = 5;
    generate->add_option("--masks", g_masks, "Directory of .png/.nsrm class-id masks")->required();
    generate->add_option("--out", g_out, "Output JSONL task file")->required();
    generate->add_option("--task", g_task, "Task to emit: 1, 2, 3 or all");
    generate->add_option("--seed", g_seed, "Root RNG seed");
    generate->add_option("--backend", g_backend, "Query text backend: template or http");
    generate->add_option("--backend-url", g_backend_url,
                         "HTTP backend base URL (or $" + std::string(kBackendUrlEnv) + ")");
    generate->add_option("--per-mask", g_per_mask, "Scenario draws per mask");
    generate->add_option("--min-area", g_min_area, "Majority-fill area threshold");
    generate->add_option("--core-depth", g_core_depth, "Erosion iterations for region cores");
    generate->add_option("--jobs", g_jobs, "Worker threads (0 = hardware)");
    generate->add_option("--max-retries", g_max_retries, "Query synthesis attempts");
    generate->add_option("--dump-graph", g_dump_graph,
                         "Directory for per-mask adjacency JSON dumps");

    // stratify
    auto* stratify = app.add_subcommand("stratify", "Recompute difficulty tiers in a task file");
    std::string s_tasks, s_lambdas, s_thresholds = "auto";
    stratify->add_option("--tasks", s_tasks, "Task JSONL file (rewritten in place)")->required();
    stratify->add_option("--lambdas", s_lambdas, "Four comma-separated complexity weights");
    stratify->add_option("--thresholds", s_thresholds, "'auto' or 't_easy,t_hard'");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Score candidate answers against a task file");
    std::string e_tasks, e_answers, e_out, e_per_sample, e_masks_root, e_format = "summary";
    evaluate->add_option("--tasks", e_tasks, "Task JSONL file")->required();
    evaluate->add_option("--answers", e_answers, "Answer JSONL file")->required();
    evaluate->add_option("--out", e_out, "Write the aggregate report JSON here");
    evaluate->add_option("--per-sample", e_per_sample, "Write per-sample records JSONL here");
    evaluate->add_option("--masks-root", e_masks_root, "Prefix for relative mask_ref paths");
    evaluate->add_option("--format", e_format, "stdout format: json, jsonl or summary");

    // validate
    auto* validate = app.add_subcommand("validate", "Run planner/oracle self-checks");
    int v_grids = 200, v_size = 48;
    std::uint64_t v_seed = 7;
    validate->add_option("--grids", v_grids, "Random instances for the optimality check");
    validate->add_option("--size", v_size, "Grid side length");
    validate->add_option("--seed", v_seed, "RNG seed");

    // render
    auto* render = app.add_subcommand("render", "Write a PNG overlay of a mask and trajectories");
    std::string r_mask, r_tasks, r_sample, r_answers, r_masks_root, r_out;
    bool r_boundaries = false;
    render->add_option("--mask", r_mask, "Mask file (optional with --tasks)");
    render->add_option("--tasks", r_tasks, "Task JSONL file");
    render->add_option("--sample-id", r_sample, "Sample to overlay");
    render->add_option("--answers", r_answers, "Overlay a candidate's reconstructed path too");
    render->add_option("--masks-root", r_masks_root, "Prefix for relative mask_ref paths");
    render->add_flag("--boundaries", r_boundaries, "Outline region boundaries");
    render->add_option("--out", r_out, "Output PNG")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed())
            return cmd_generate(g_masks, g_out, g_task, g_seed, g_backend, g_backend_url,
                                g_per_mask, g_min_area, g_core_depth, g_jobs, g_max_retries,
                                g_dump_graph);
        if (stratify->parsed()) return cmd_stratify(s_tasks, s_lambdas, s_thresholds);
        if (evaluate->parsed())
            return cmd_evaluate(e_tasks, e_answers, e_out, e_per_sample, e_masks_root, e_format);
        if (validate->parsed()) return cmd_validate(v_grids, v_size, v_seed);
        if (render->parsed())
            return cmd_render(r_mask, r_tasks, r_sample, r_answers, r_masks_root, r_boundaries,
                              r_out);
    } catch (const SchemaError& e) {
        std::cerr << nlohmann::json{{"error", "schema"}, {"message", e.what()}}.dump() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", "runtime"}, {"message", e.what()}}.dump() << '\n';
        return 1;
    }
    return 0;
}
