#include <algorithm>
#include <cctype>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "routebench/generator.hpp"
#include "routebench/serialization.hpp"

namespace routebench::gen {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

const char* objective_phrase(kb::Objective o) {
    switch (o) {
        case kb::Objective::Fastest: return "fastest";
        case kb::Objective::Comfort: return "most comfortable";
        case kb::Objective::Safest: return "safest";
        case kb::Objective::Shortest: return "shortest";
    }
    return "";
}

std::string join_names(const std::vector<int>& ids, const char* sep) {
    std::ostringstream os;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) os << sep;
        os << kb::class_name(ids[i]);
    }
    return os.str();
}

// "Developed space > Road > ... " with "=" joining same-tier classes.
std::string priority_phrase(const kb::ConstraintVectors& v) {
    std::vector<std::pair<int, int>> tiered;  // (tier, class), tier descending
    for (int i = 0; i < kb::kNumClasses; ++i)
        if (v.trav[i]) tiered.emplace_back(-static_cast<int>(v.pref[i]), i);
    std::sort(tiered.begin(), tiered.end());

    std::ostringstream os;
    for (std::size_t i = 0; i < tiered.size(); ++i) {
        if (i) os << (tiered[i].first == tiered[i - 1].first ? " = " : " > ");
        os << kb::class_name(tiered[i].second);
    }
    return os.str();
}

}  // namespace

GenerationResult TemplateBackend::generate(const kb::ScenarioConfig& config) {
    const auto& kbase = kb::KnowledgeBase::instance();
    const kb::ConstraintVectors v = kbase.derive_vectors(config);

    std::vector<int> blocked;
    for (int i = 0; i < kb::kNumClasses; ++i)
        if (!v.trav[i]) blocked.push_back(i);

    std::ostringstream text;
    text << "A " << lower(kb::agent_name(config.agent)) << " must travel from a "
         << kb::class_name(config.start_class) << " area to a "
         << kb::class_name(config.end_class) << " area along the "
         << objective_phrase(config.objective) << " route. "
         << "Usable terrain: " << join_names(config.allowed.ids(), ", ") << ". "
         << "Terrain priority: " << priority_phrase(v) << ". ";
    if (blocked.empty())
        text << "No terrain is off limits.";
    else
        text << "Off-limits terrain: " << join_names(blocked, ", ") << ".";

    return GenerationResult{text.str(), v};
}

bool TemplateBackend::verify(const std::string&) {
    // Template text is rendered straight from the KB derivation, so it is
    // compliant by construction.
    return true;
}

struct HttpBackend::Impl {
    explicit Impl(std::string url) : base_url(std::move(url)), client(base_url) {
        client.set_read_timeout(60, 0);
        client.set_connection_timeout(10, 0);
    }
    std::string base_url;
    httplib::Client client;
};

HttpBackend::HttpBackend(std::string base_url) : impl_(std::make_unique<Impl>(std::move(base_url))) {}
HttpBackend::~HttpBackend() = default;

GenerationResult HttpBackend::generate(const kb::ScenarioConfig& config) {
    const std::string body = io::config_to_json(config).dump();
    auto res = impl_->client.Post("/generate", body, "application/json");
    if (!res || res->status != 200)
        throw GenerationFailedError("backend /generate failed: " +
                                    (res ? std::to_string(res->status) : "no response"));
    try {
        const auto j = nlohmann::json::parse(res->body);
        GenerationResult out;
        out.text = j.at("text").get<std::string>();
        out.vectors = io::vectors_from_json(j);
        return out;
    } catch (const std::exception& e) {
        throw GenerationFailedError(std::string("backend /generate returned bad JSON: ") +
                                    e.what());
    }
}

bool HttpBackend::verify(const std::string& text) {
    const std::string body = nlohmann::json{{"text", text}}.dump();
    auto res = impl_->client.Post("/verify", body, "application/json");
    if (!res || res->status != 200) return false;
    try {
        return nlohmann::json::parse(res->body).at("compliant").get<bool>();
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace routebench::gen
