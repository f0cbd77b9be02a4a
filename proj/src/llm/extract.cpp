#include "reqforge/llm/extract.hpp"

namespace reqforge::llm {
namespace {

template <class T>
Parsed<StructuredPayload> widen(Parsed<T> p) {
    if (auto* f = std::get_if<ParseFailure>(&p)) return *f;
    return StructuredPayload{std::get<T>(std::move(p))};
}

// Interviewer replies carry no step of their own outside a live interview.
Parsed<agents::InterviewerReply> parse_any_step(const nlohmann::json& j) {
    auto step = agents::InterviewStep::Components;
    if (j.is_object() && j.contains("step") && j["step"].is_string()) {
        if (auto s = agents::interview_step_from_string(j["step"].get<std::string>())) step = *s;
    }
    return agents::parse_interviewer_reply(j, step);
}

}  // namespace

std::string_view to_string(Schema schema) {
    switch (schema) {
        case Schema::TaskList: return "TaskList";
        case Schema::SystemPromptDraft: return "SystemPromptDraft";
        case Schema::CritiqueReport: return "CritiqueReport";
        case Schema::RequirementBatch: return "RequirementBatch";
        case Schema::DocScoreReply: return "DocScoreReply";
        case Schema::InterviewTurnReply: return "InterviewTurnReply";
        case Schema::SrsSections: return "SrsSections";
    }
    return "?";
}

Parsed<StructuredPayload> extract_structured(const ChatResponse& response, Schema schema) {
    switch (schema) {
        case Schema::TaskList: return widen(extract_json<cot::TaskList>(response, cot::parse_task_list));
        case Schema::SystemPromptDraft:
            return widen(extract_json<cot::SystemPromptDraft>(response, cot::parse_system_prompt_draft));
        case Schema::CritiqueReport: return widen(extract_json<cot::CritiqueReport>(response, cot::parse_critique));
        case Schema::RequirementBatch:
            return widen(extract_json<std::vector<agents::RequirementStatement>>(response, agents::parse_requirement_batch));
        case Schema::DocScoreReply:
            return widen(extract_json<judge::DocScore>(
                response, [](const nlohmann::json& j) { return judge::parse_doc_score_json(j); }));
        case Schema::InterviewTurnReply: return widen(extract_json<agents::InterviewerReply>(response, parse_any_step));
        case Schema::SrsSections: return widen(extract_json<agents::SrsDraft>(response, agents::parse_srs_sections));
    }
    return fail("schema", "unknown schema");
}

}  // namespace reqforge::llm
