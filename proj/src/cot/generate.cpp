#include "reqforge/cot/generate.hpp"

#include "reqforge/agents/prompts.hpp"
#include "reqforge/common/text.hpp"

namespace reqforge::cot {

std::string critique_feedback_block(const CritiqueReport& report) {
    std::string out = "\n\nCritic review of your previous version (revise it so that every point is addressed):\n";
    std::vector<std::string> scores;
    for (const auto& [part, score] : report.part_scores) scores.push_back(part + "=" + std::to_string(score));
    out += "Part scores: " + text::join(scores, ", ") + "\n";
    out += "Strengths: " + report.summary_strengths + "\n";
    out += "Weaknesses: " + report.summary_weaknesses + "\n";
    out += "Feedback: " + report.feedback;
    return out;
}

llm::ChatRequest build_cot_request(const agents::SrsDraft& srs, const agents::ScenarioContext& ctx,
                                   const std::optional<CritiqueReport>& prior_feedback,
                                   const GenerationNotes& notes) {
    const bool user_mode = ctx.prompt_kind == PromptKind::UserPrompt;
    std::string user = agents::request_tag(user_mode ? "coter.task_list" : "coter.system_prompt");
    user += user_mode ? "\nInitial user prompt:\n" : "\nCurrent system prompt:\n";
    user += ctx.initial_prompt + "\n\n";
    user += "Requirements specification:\n" + agents::render_srs(srs) + "\n";
    if (user_mode) {
        user += "Write the programming task list for this specification as one fenced json block in the task list "
                "schema. Documentation and environment tasks first, code tasks in dependency order, exactly one "
                "entry task that nothing depends on.";
    } else {
        user += "Write the refined system prompt as one fenced json block in the system prompt schema, with all five "
                "components filled in and at least one work mode.";
    }
    if (prior_feedback) user += critique_feedback_block(*prior_feedback);

    llm::ChatRequest request;
    request.messages.push_back({llm::Role::System, agents::build_agent_prompt(agents::AgentRole::CoTer, ctx)});
    request.messages.push_back({llm::Role::User, append_notes(std::move(user), notes)});
    return request;
}

ChainOfThought generate_cot(const agents::SrsDraft& srs, const agents::ScenarioContext& ctx,
                            const std::optional<CritiqueReport>& prior_feedback, llm::Gateway& gateway,
                            const GenerationNotes& notes) {
    const auto response = gateway.complete(build_cot_request(srs, ctx, prior_feedback, notes));
    if (ctx.prompt_kind == PromptKind::SystemPrompt) {
        return {llm::value_or_throw(llm::extract_json<SystemPromptDraft>(response, parse_system_prompt_draft))};
    }
    return {llm::value_or_throw(llm::extract_json<TaskList>(response, [](const nlohmann::json& j) -> llm::Parsed<TaskList> {
        auto parsed = parse_task_list(j);
        if (auto* raw = std::get_if<TaskList>(&parsed)) {
            try {
                return order_tasks(std::move(raw->tasks));
            } catch (const TaskGraphError& e) {
                return llm::fail(e.rule(), e.what());
            }
        }
        return parsed;
    }))};
}

ChainOfThought chain_from_srs(const agents::SrsDraft& srs, const agents::ScenarioContext& ctx) {
    if (ctx.prompt_kind == PromptKind::UserPrompt) {
        Task entry;
        entry.id = "T1";
        entry.title = "Implement the specification";
        entry.description = agents::render_srs(srs);
        entry.category = TaskCategory::Entry;
        return {TaskList{{std::move(entry)}}};
    }
    SystemPromptDraft draft;
    draft.role_definition = ctx.initial_prompt;
    draft.knowledge = agents::render_srs(srs);
    draft.tools = "No tools specified.";
    draft.context_info = ctx.scenario_description;
    draft.work_modes.push_back({"Default", "Follow the role definition and the requirements listed under Knowledge.",
                                {"Handle each request within the responsibilities of the role."}});
    return {std::move(draft)};
}

}  // namespace reqforge::cot
