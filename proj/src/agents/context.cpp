#include "reqforge/agents/context.hpp"

#include "reqforge/agents/knowledge.hpp"
#include "reqforge/common/text.hpp"

namespace reqforge::agents {

std::string_view to_string(AgentRole role) {
    switch (role) {
        case AgentRole::Interviewer: return "Interviewer";
        case AgentRole::Interviewee: return "Interviewee";
        case AgentRole::CoTer: return "CoTer";
        case AgentRole::Critic: return "Critic";
    }
    return "?";
}

std::vector<std::string> context_violations(const ScenarioContext& ctx) {
    std::vector<std::string> out;
    if (text::trim(ctx.team_intro).empty()) out.push_back("team_intro is empty");
    if (text::trim(ctx.scenario_description).empty()) out.push_back("scenario_description is empty");
    if (text::trim(ctx.initial_prompt).empty()) out.push_back("initial_prompt is empty");
    return out;
}

ScenarioContext default_context(PromptKind kind, std::string initial_prompt) {
    ScenarioContext ctx;
    ctx.team_intro = std::string(text::trim(knowledge_text("team_intro.txt")));
    ctx.scenario_description = std::string(text::trim(knowledge_text(
        kind == PromptKind::UserPrompt ? "scenario_user_prompt.txt" : "scenario_system_prompt.txt")));
    ctx.prompt_kind = kind;
    ctx.initial_prompt = std::move(initial_prompt);
    return ctx;
}

}  // namespace reqforge::agents
