#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "reqforge/cot/chain.hpp"
#include "reqforge/llm/structured.hpp"

namespace reqforge::cot {

/// Four requirements-engineering aspects, three prompt-engineering principles and the
/// executability check.
enum class ReviewAspect {
    Completeness,
    Correctness,
    OrganizationTraceability,
    QualityAttributes,
    Clear,
    Concise,
    Consistency,
    TechnicalDetailExecutability,
};

inline constexpr std::array<ReviewAspect, 8> kAllAspects = {
    ReviewAspect::Completeness, ReviewAspect::Correctness, ReviewAspect::OrganizationTraceability,
    ReviewAspect::QualityAttributes, ReviewAspect::Clear, ReviewAspect::Concise, ReviewAspect::Consistency,
    ReviewAspect::TechnicalDetailExecutability};

/// JSON key, e.g. "OrganizationTraceability".
std::string_view aspect_key(ReviewAspect a);
/// Heading, e.g. "Organization and Traceability".
std::string_view aspect_title(ReviewAspect a);
/// Accepts the key or the heading, ignoring case, spaces and punctuation.
std::optional<ReviewAspect> aspect_from_string(std::string_view s);

inline constexpr int kMinPartScore = 1;
inline constexpr int kMaxPartScore = 5;

struct CritiqueReport {
    std::map<ReviewAspect, std::string> aspect_notes;
    std::string summary_strengths;
    std::string summary_weaknesses;
    std::map<std::string, int> part_scores;
    std::string feedback;

    bool operator==(const CritiqueReport&) const = default;
};

/// Rules that need no knowledge of the critiqued chain: all aspects, the summary, the
/// feedback, integer scores in [1,5].
llm::Parsed<CritiqueReport> parse_critique(const nlohmann::json& j);

/// Rules tying the report to `cot`: exactly one score per part, no unknown parts.
std::vector<std::string> coverage_violations(const CritiqueReport& report, const ChainOfThought& cot);

int min_part_score(const CritiqueReport& report);

nlohmann::json critique_to_json(const CritiqueReport& report);
CritiqueReport critique_from_json(const nlohmann::json& j);

}  // namespace reqforge::cot
