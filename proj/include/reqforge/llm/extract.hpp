#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "reqforge/agents/interview.hpp"
#include "reqforge/agents/srs.hpp"
#include "reqforge/cot/critique.hpp"
#include "reqforge/judge/doc_score.hpp"

namespace reqforge::llm {

/// Reply shapes the agents and the judge ask for.
enum class Schema {
    TaskList,
    SystemPromptDraft,
    CritiqueReport,
    RequirementBatch,
    DocScoreReply,
    InterviewTurnReply,
    SrsSections,
};

std::string_view to_string(Schema schema);

using StructuredPayload = std::variant<cot::TaskList, cot::SystemPromptDraft, cot::CritiqueReport,
                                       std::vector<agents::RequirementStatement>, judge::DocScore,
                                       agents::InterviewerReply, agents::SrsDraft>;

/// Schema-level validation only: task lists keep the reply's order, critiques are not checked
/// against a chain and SRS drafts not against a record. Never throws.
Parsed<StructuredPayload> extract_structured(const ChatResponse& response, Schema schema);

}  // namespace reqforge::llm
