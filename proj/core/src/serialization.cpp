#include "routebench/serialization.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace routebench::io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string hash_to_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::uint64_t hash_from_hex(const std::string& s) {
    return std::stoull(s, nullptr, 16);
}

ordered_json coord_to_json(PixelCoord p) { return ordered_json::array({p.row, p.col}); }

PixelCoord coord_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw SchemaError("coordinate must be an integer [row, col] pair");
    return {j[0].get<std::int32_t>(), j[1].get<std::int32_t>()};
}

ordered_json path_to_json(const std::vector<PixelCoord>& path) {
    ordered_json arr = ordered_json::array();
    for (PixelCoord p : path) arr.push_back(coord_to_json(p));
    return arr;
}

std::vector<PixelCoord> path_from_json(const nlohmann::json& j) {
    std::vector<PixelCoord> out;
    out.reserve(j.size());
    for (const auto& item : j) out.push_back(coord_from_json(item));
    return out;
}

template <typename T, std::size_t N>
std::array<T, N> fixed_array_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != N)
        throw SchemaError(std::string(what) + " must be an array of length " +
                          std::to_string(N));
    std::array<T, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = j[i].get<T>();
    return out;
}

void require_schema(const nlohmann::json& j, int expected, const char* what) {
    const int got = j.value("schema_version", -1);
    if (got != expected)
        throw SchemaError(std::string(what) + ": unsupported schema_version " +
                          std::to_string(got));
}

}  // namespace

ordered_json config_to_json(const kb::ScenarioConfig& config) {
    return ordered_json{{"agent", kb::agent_name(config.agent)},
                        {"objective", kb::objective_name(config.objective)},
                        {"start_class", config.start_class},
                        {"end_class", config.end_class},
                        {"allowed", config.allowed.ids()}};
}

kb::ScenarioConfig config_from_json(const nlohmann::json& j) {
    kb::ScenarioConfig config;
    config.agent = kb::agent_from_string(j.at("agent").get<std::string>());
    config.objective = kb::objective_from_string(j.at("objective").get<std::string>());
    config.start_class = j.at("start_class").get<int>();
    config.end_class = j.at("end_class").get<int>();
    for (int id : j.at("allowed").get<std::vector<int>>()) {
        if (id < 0 || id >= kb::kNumClasses) throw SchemaError("allowed class id out of range");
        config.allowed.add(id);
    }
    return config;
}

ordered_json vectors_to_json(const kb::ConstraintVectors& v) {
    return ordered_json{{"trav", v.trav}, {"pref", v.pref}};
}

kb::ConstraintVectors vectors_from_json(const nlohmann::json& j) {
    kb::ConstraintVectors v;
    v.trav = fixed_array_from_json<std::uint8_t, kb::kNumClasses>(j.at("trav"), "trav");
    v.pref = fixed_array_from_json<std::uint8_t, kb::kNumClasses>(j.at("pref"), "pref");
    return v;
}

ordered_json sample_to_json(const gen::TaskSample& sample) {
    ordered_json j;
    j["schema_version"] = kTaskSchemaVersion;
    j["sample_id"] = sample.sample_id;
    j["task"] = sample.task;
    j["query"] = config_to_json(sample.query.config);
    j["query"]["text"] = sample.query.text;
    j["gt"] = vectors_to_json(sample.query.gt);
    if (sample.task >= 2) {
        j["mask_ref"] = sample.mask_ref;
        j["mask_hash"] = hash_to_hex(sample.mask_hash);
        j["fill_min_area"] = sample.fill_min_area;
        j["region_vector"] = sample.region_vector;
        j["vectors"] = vectors_to_json(sample.vectors);
        j["class_count"] = sample.class_count;
    }
    if (sample.task == 3) {
        j["start"] = coord_to_json(sample.start);
        j["end"] = coord_to_json(sample.end);
        j["trajectory"] = path_to_json(sample.trajectory);
        j["path_cost"] = sample.path_cost;
        j["complexity"] = ordered_json{{"h_inter", sample.complexity.h_inter},
                                       {"h_intra", sample.complexity.h_intra},
                                       {"h_count", sample.complexity.h_count},
                                       {"c_topo", sample.complexity.c_topo},
                                       {"lambdas", sample.complexity.lambdas.w},
                                       {"score", sample.complexity.score}};
    }
    if (sample.tier) j["tier"] = strat::tier_name(*sample.tier);
    return j;
}

gen::TaskSample sample_from_json(const nlohmann::json& j) {
    require_schema(j, kTaskSchemaVersion, "task sample");
    gen::TaskSample sample;
    sample.sample_id = j.at("sample_id").get<std::string>();
    sample.task = j.at("task").get<int>();
    if (sample.task < 1 || sample.task > 3) throw SchemaError("task must be 1, 2 or 3");
    sample.query.config = config_from_json(j.at("query"));
    sample.query.text = j.at("query").at("text").get<std::string>();
    sample.query.gt = vectors_from_json(j.at("gt"));
    sample.vectors = sample.query.gt;
    if (sample.task >= 2) {
        sample.mask_ref = j.at("mask_ref").get<std::string>();
        sample.mask_hash = hash_from_hex(j.at("mask_hash").get<std::string>());
        sample.fill_min_area = j.at("fill_min_area").get<int>();
        sample.region_vector =
            fixed_array_from_json<int, kb::kNumClasses>(j.at("region_vector"), "region_vector");
        sample.vectors = vectors_from_json(j.at("vectors"));
        sample.class_count = j.at("class_count").get<int>();
    }
    if (sample.task == 3) {
        sample.start = coord_from_json(j.at("start"));
        sample.end = coord_from_json(j.at("end"));
        sample.trajectory = path_from_json(j.at("trajectory"));
        sample.path_cost = j.at("path_cost").get<std::uint64_t>();
        const auto& cj = j.at("complexity");
        sample.complexity.h_inter = cj.at("h_inter").get<double>();
        sample.complexity.h_intra = cj.at("h_intra").get<double>();
        sample.complexity.h_count = cj.at("h_count").get<double>();
        sample.complexity.c_topo = cj.at("c_topo").get<double>();
        sample.complexity.lambdas.w = fixed_array_from_json<double, 4>(cj.at("lambdas"), "lambdas");
        sample.complexity.score = cj.at("score").get<double>();
    }
    if (j.contains("tier")) sample.tier = strat::tier_from_string(j.at("tier").get<std::string>());
    return sample;
}

void write_samples_jsonl(std::ostream& out, const std::vector<gen::TaskSample>& samples) {
    for (const gen::TaskSample& s : samples) out << sample_to_json(s).dump() << '\n';
}

void write_samples_jsonl(const std::string& path, const std::vector<gen::TaskSample>& samples) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path + ": cannot open for writing");
    write_samples_jsonl(out, samples);
}

std::vector<gen::TaskSample> read_samples_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(path + ": cannot open");
    std::vector<gen::TaskSample> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            samples.push_back(sample_from_json(nlohmann::json::parse(line)));
        } catch (const SchemaError&) {
            throw;
        } catch (const std::exception& e) {
            throw SchemaError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return samples;
}

ordered_json answer_to_json(const eval::CandidateAnswer& answer) {
    ordered_json j;
    j["schema_version"] = kAnswerSchemaVersion;
    j["sample_id"] = answer.sample_id;
    j["task"] = answer.task;
    if (answer.task == 1 || answer.task == 2) {
        j["trav"] = answer.pred_trav;
        j["pref"] = answer.pred_pref;
    }
    if (answer.task == 2) j["region_vector"] = answer.pred_region;
    if (answer.task == 3) j["waypoints"] = path_to_json(answer.waypoints);
    return j;
}

eval::CandidateAnswer answer_from_json(const nlohmann::json& j) {
    require_schema(j, kAnswerSchemaVersion, "answer");
    eval::CandidateAnswer answer;
    answer.sample_id = j.at("sample_id").get<std::string>();
    answer.task = j.at("task").get<int>();
    if (answer.task < 1 || answer.task > 3) throw SchemaError("task must be 1, 2 or 3");
    if (answer.task == 1 || answer.task == 2) {
        answer.pred_trav = fixed_array_from_json<std::uint8_t, kb::kNumClasses>(j.at("trav"), "trav");
        answer.pred_pref = fixed_array_from_json<std::uint8_t, kb::kNumClasses>(j.at("pref"), "pref");
    }
    if (answer.task == 2)
        answer.pred_region =
            fixed_array_from_json<int, kb::kNumClasses>(j.at("region_vector"), "region_vector");
    if (answer.task == 3) answer.waypoints = path_from_json(j.at("waypoints"));
    return answer;
}

void write_answers_jsonl(const std::string& path,
                         const std::vector<eval::CandidateAnswer>& answers) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path + ": cannot open for writing");
    for (const eval::CandidateAnswer& a : answers) out << answer_to_json(a).dump() << '\n';
}

std::vector<eval::CandidateAnswer> read_answers_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(path + ": cannot open");
    std::vector<eval::CandidateAnswer> answers;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            answers.push_back(answer_from_json(nlohmann::json::parse(line)));
        } catch (const SchemaError&) {
            throw;
        } catch (const std::exception& e) {
            throw SchemaError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return answers;
}

eval::CandidateAnswer answer_from_ground_truth(const gen::TaskSample& sample) {
    eval::CandidateAnswer answer;
    answer.sample_id = sample.sample_id;
    answer.task = sample.task;
    const kb::ConstraintVectors& v = sample.task == 1 ? sample.query.gt : sample.vectors;
    answer.pred_trav = v.trav;
    answer.pred_pref = v.pref;
    answer.pred_region = sample.region_vector;
    answer.waypoints = sample.trajectory;
    return answer;
}

ordered_json per_sample_to_json(const eval::PerSampleRecord& record) {
    ordered_json j;
    j["sample_id"] = record.sample_id;
    j["task"] = record.task;
    if (record.tier) j["tier"] = strat::tier_name(*record.tier);
    auto set_opt = [&](const char* key, const std::optional<double>& v) {
        if (v) j[key] = *v;
    };
    set_opt("tm", record.tm);
    set_opt("pr", record.pr);
    set_opt("fm", record.fm);
    set_opt("rm", record.rm);
    if (record.task3) {
        j["compliant"] = record.task3->compliant;
        j["missing_answer"] = record.task3->missing_answer;
        j["disconnected"] = record.task3->disconnected;
        if (record.task3->compliant && !record.task3->disconnected)
            j["cr"] = record.task3->cost_ratio;
        if (!record.task3->compliant) j["vr"] = record.task3->violation_ratio;
        j["cd"] = record.task3->chamfer;
    }
    return j;
}

}  // namespace routebench::io
