#include "reqforge/cot/critique.hpp"

#include <algorithm>
#include <set>

#include "reqforge/common/text.hpp"

namespace reqforge::cot {
namespace {

struct AspectInfo {
    ReviewAspect aspect;
    std::string_view key;
    std::string_view title;
};

constexpr AspectInfo kAspects[] = {
    {ReviewAspect::Completeness, "Completeness", "Completeness"},
    {ReviewAspect::Correctness, "Correctness", "Correctness"},
    {ReviewAspect::OrganizationTraceability, "OrganizationTraceability", "Organization and Traceability"},
    {ReviewAspect::QualityAttributes, "QualityAttributes", "Quality Attributes"},
    {ReviewAspect::Clear, "Clear", "Clear"},
    {ReviewAspect::Concise, "Concise", "Concise"},
    {ReviewAspect::Consistency, "Consistency", "Consistency"},
    {ReviewAspect::TechnicalDetailExecutability, "TechnicalDetailExecutability", "Technical Detail and Executability"},
};

const AspectInfo& info(ReviewAspect a) { return kAspects[static_cast<int>(a)]; }

std::optional<std::string> string_at(const nlohmann::json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j[key].is_string()) return std::nullopt;
    return j[key].get<std::string>();
}

}  // namespace

std::string_view aspect_key(ReviewAspect a) { return info(a).key; }
std::string_view aspect_title(ReviewAspect a) { return info(a).title; }

std::optional<ReviewAspect> aspect_from_string(std::string_view s) {
    const auto key = text::fold_key(s);
    for (const auto& i : kAspects) {
        if (key == text::fold_key(i.key) || key == text::fold_key(i.title)) return i.aspect;
    }
    return std::nullopt;
}

llm::Parsed<CritiqueReport> parse_critique(const nlohmann::json& j) {
    if (!j.is_object()) return llm::fail("schema", "expected a JSON object");
    CritiqueReport r;

    if (!j.contains("aspects") || !j["aspects"].is_object()) return llm::fail("missing aspects", "no aspects object");
    for (const auto& [key, value] : j["aspects"].items()) {
        const auto aspect = aspect_from_string(key);
        if (!aspect) return llm::fail("unknown aspect", key);
        if (!value.is_string() || text::trim(value.get<std::string>()).empty()) {
            return llm::fail("missing aspects", "empty note for " + key);
        }
        r.aspect_notes[*aspect] = value.get<std::string>();
    }
    for (auto a : kAllAspects) {
        if (!r.aspect_notes.count(a)) return llm::fail("missing aspects", "no note for " + std::string(aspect_key(a)));
    }

    const auto strengths = j.contains("summary") ? string_at(j["summary"], "strengths") : std::nullopt;
    const auto weaknesses = j.contains("summary") ? string_at(j["summary"], "weaknesses") : std::nullopt;
    if (!strengths || !weaknesses || text::trim(*strengths).empty() || text::trim(*weaknesses).empty()) {
        return llm::fail("missing summary", "summary needs non-empty strengths and weaknesses");
    }
    r.summary_strengths = *strengths;
    r.summary_weaknesses = *weaknesses;

    if (!j.contains("part_scores") || !j["part_scores"].is_object() || j["part_scores"].empty()) {
        return llm::fail("missing part scores", "no part_scores object");
    }
    for (const auto& [part, score] : j["part_scores"].items()) {
        if (!score.is_number_integer()) return llm::fail("score type", part + " is not scored with an integer");
        const auto value = score.get<long long>();
        if (value < kMinPartScore || value > kMaxPartScore) {
            return llm::fail("score range", part + " scored " + std::to_string(value) + ", outside 1..5");
        }
        r.part_scores[part] = static_cast<int>(value);
    }

    const auto feedback = string_at(j, "feedback");
    if (!feedback || text::trim(*feedback).empty()) return llm::fail("missing feedback", "no feedback text");
    r.feedback = *feedback;
    return r;
}

std::vector<std::string> coverage_violations(const CritiqueReport& report, const ChainOfThought& cot) {
    std::vector<std::string> out;
    const auto parts = part_ids(cot);
    const std::set<std::string> known(parts.begin(), parts.end());
    for (const auto& p : parts) {
        if (!report.part_scores.count(p)) out.push_back("part " + p + " has no score");
    }
    for (const auto& [p, _] : report.part_scores) {
        if (!known.count(p)) out.push_back("score for unknown part " + p);
    }
    return out;
}

int min_part_score(const CritiqueReport& report) {
    int low = kMaxPartScore;
    for (const auto& [_, s] : report.part_scores) low = std::min(low, s);
    return low;
}

nlohmann::json critique_to_json(const CritiqueReport& report) {
    nlohmann::json aspects = nlohmann::json::object();
    for (const auto& [a, note] : report.aspect_notes) aspects[std::string(aspect_key(a))] = note;
    nlohmann::json scores = nlohmann::json::object();
    for (const auto& [p, s] : report.part_scores) scores[p] = s;
    return {{"aspects", aspects},
            {"summary", {{"strengths", report.summary_strengths}, {"weaknesses", report.summary_weaknesses}}},
            {"part_scores", scores},
            {"feedback", report.feedback}};
}

CritiqueReport critique_from_json(const nlohmann::json& j) {
    auto parsed = parse_critique(j);
    if (auto* f = std::get_if<llm::ParseFailure>(&parsed)) throw std::runtime_error("critique: " + f->rule + ": " + f->detail);
    return std::get<CritiqueReport>(std::move(parsed));
}

}  // namespace reqforge::cot
