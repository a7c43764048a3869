#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "routebench/evaluate.hpp"
#include "routebench/generator.hpp"

#include <nlohmann/json_fwd.hpp>

namespace routebench::io {

inline constexpr int kTaskSchemaVersion = 1;
inline constexpr int kAnswerSchemaVersion = 1;

nlohmann::ordered_json config_to_json(const kb::ScenarioConfig& config);
kb::ScenarioConfig config_from_json(const nlohmann::json& j);

nlohmann::ordered_json vectors_to_json(const kb::ConstraintVectors& v);
kb::ConstraintVectors vectors_from_json(const nlohmann::json& j);

nlohmann::ordered_json sample_to_json(const gen::TaskSample& sample);
gen::TaskSample sample_from_json(const nlohmann::json& j);

/// One compact JSON object per line. Field order is fixed, so re-serializing
/// a parsed file reproduces it byte for byte.
void write_samples_jsonl(std::ostream& out, const std::vector<gen::TaskSample>& samples);
void write_samples_jsonl(const std::string& path, const std::vector<gen::TaskSample>& samples);
std::vector<gen::TaskSample> read_samples_jsonl(const std::string& path);

nlohmann::ordered_json answer_to_json(const eval::CandidateAnswer& answer);
eval::CandidateAnswer answer_from_json(const nlohmann::json& j);
void write_answers_jsonl(const std::string& path,
                         const std::vector<eval::CandidateAnswer>& answers);
std::vector<eval::CandidateAnswer> read_answers_jsonl(const std::string& path);

/// Ground truth echoed back as a candidate answer; used by self-evaluation
/// and the determinism checks.
eval::CandidateAnswer answer_from_ground_truth(const gen::TaskSample& sample);

nlohmann::ordered_json per_sample_to_json(const eval::PerSampleRecord& record);

}  // namespace routebench::io
