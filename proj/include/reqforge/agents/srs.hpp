#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "reqforge/agents/interview.hpp"

namespace reqforge::agents {

struct SrsSection {
    std::string heading;
    std::string body;
    std::vector<int> source_turn_ids;

    bool operator==(const SrsSection&) const = default;
};

struct SrsDraft {
    std::vector<SrsSection> sections;

    bool operator==(const SrsDraft&) const = default;
};

inline constexpr std::array<std::string_view, 7> kDefaultSrsSkeleton = {
    "Purpose",   "Scope", "System Components", "Functional Requirements", "Non-functional Requirements",
    "Front-end Requirements", "Deferred Features"};

/// Structural rules plus full traceability against `record`.
std::vector<std::string> srs_violations(const SrsDraft& draft, const InterviewRecord& record);

/// Structural rules only (unique headings, at least one section, positive turn ids).
std::vector<std::string> srs_shape_violations(const SrsDraft& draft);

std::string render_srs(const SrsDraft& draft);

/// {"sections": [{"heading", "body", "source_turns": [1, 2]}]}
llm::Parsed<SrsDraft> parse_srs_sections(const nlohmann::json& j);

llm::ChatRequest build_srs_request(const InterviewRecord& record, const ScenarioContext& ctx,
                                   const GenerationNotes& notes);

/// Interviewer drafts the specification. Traceability gaps are parse failures.
SrsDraft draft_srs(const InterviewRecord& record, const ScenarioContext& ctx, llm::Gateway& gateway,
                   const GenerationNotes& notes = {});

/// Stand-in used when the Analysis stage is skipped: one section wrapping the raw record.
SrsDraft wrap_record_as_srs(const InterviewRecord& record, const ScenarioContext& ctx);

}  // namespace reqforge::agents
