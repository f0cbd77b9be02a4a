#include "reqforge/agents/prompts.hpp"

#include <algorithm>

#include "reqforge/agents/knowledge.hpp"
#include "reqforge/common/text.hpp"

namespace reqforge::agents {
namespace {

constexpr std::string_view kInterviewer = R"(Your role: Interviewer.
During elicitation you interview the Interviewee one question at a time, following the interview protocol below.
Ask about the current step only. When the step is covered, say so instead of asking filler questions.
During analysis you turn the interview record into a requirements specification. Every section cites the interview turns it is based on, and every turn is cited by at least one section.)";

constexpr std::string_view kInterviewee = R"(Your role: Interviewee.
You speak for the user who wrote the initial prompt. Your only sources are the initial prompt and the scenario description; fill gaps with the most plausible choice for that user and keep it consistent across answers.
Answer each question with requirements written in the templates below, one requirement per line, nothing else.)";

constexpr std::string_view kCoTer = R"(Your role: CoTer.
You rewrite the requirements specification as a chain of thought for the target model.
For a user prompt, produce a programming task list: documentation and environment setup first, then the code tasks in dependency order, and the program entry point as the single last task.
For a system prompt, organise the content into the five components: role definition, knowledge, tools, context information and work modes.
When the Critic or the human reviewer has given feedback, revise the previous version so that every point is addressed.)";

constexpr std::string_view kCritic = R"(Your role: Critic.
You review the chain of thought produced by the CoTer against the requirements specification, following the review steps below.
Be specific: name the part, what is wrong and how to fix it.)";

// Scenario files already reach the prompt through the context, so only role knowledge is appended.
bool is_context_resource(std::string_view name) {
    return name == "team_intro.txt" || name == "scenario_user_prompt.txt" || name == "scenario_system_prompt.txt";
}

}  // namespace

std::string_view role_instructions(AgentRole role) {
    switch (role) {
        case AgentRole::Interviewer: return kInterviewer;
        case AgentRole::Interviewee: return kInterviewee;
        case AgentRole::CoTer: return kCoTer;
        case AgentRole::Critic: return kCritic;
    }
    return {};
}

std::string build_agent_prompt(AgentRole role, const ScenarioContext& ctx) {
    std::string out = ctx.team_intro;
    out += "\n\n";
    out += ctx.scenario_description;
    out += "\n\n";
    out += role_instructions(role);
    const auto consumer = text::lower(to_string(role));
    for (const auto& r : knowledge_bundle()) {
        if (is_context_resource(r.name)) continue;
        if (std::find(r.consumers.begin(), r.consumers.end(), consumer) == r.consumers.end()) continue;
        out += "\n\n";
        out += text::trim(r.text);
    }
    out += '\n';
    return out;
}

std::string request_tag(std::string_view task) { return "[request:" + std::string(task) + "]"; }

}  // namespace reqforge::agents
