#include "reqforge/agents/critic.hpp"

#include "reqforge/agents/prompts.hpp"
#include "reqforge/common/text.hpp"

namespace reqforge::agents {

llm::ChatRequest build_critique_request(const cot::ChainOfThought& cot, const SrsDraft& srs,
                                        const ScenarioContext& ctx, const GenerationNotes& notes) {
    std::string user = request_tag("critic.review");
    user += "\nInitial prompt:\n" + ctx.initial_prompt + "\n\n";
    user += "Requirements specification:\n" + render_srs(srs) + "\n";
    user += "Chain of thought to review:\n" + cot::render_for_review(cot) + "\n";
    user += "Score exactly these parts: " + text::join(cot::part_ids(cot), ", ") + "\n";
    llm::ChatRequest request;
    request.messages.push_back({llm::Role::System, build_agent_prompt(AgentRole::Critic, ctx)});
    request.messages.push_back({llm::Role::User, append_notes(std::move(user), notes)});
    return request;
}

cot::CritiqueReport critique(const cot::ChainOfThought& cot, const SrsDraft& srs, const ScenarioContext& ctx,
                             llm::Gateway& gateway, const GenerationNotes& notes) {
    const auto response = gateway.complete(build_critique_request(cot, srs, ctx, notes));
    return llm::value_or_throw(llm::extract_json<cot::CritiqueReport>(
        response, [&](const nlohmann::json& j) -> llm::Parsed<cot::CritiqueReport> {
            auto parsed = cot::parse_critique(j);
            if (auto* report = std::get_if<cot::CritiqueReport>(&parsed)) {
                if (auto v = cot::coverage_violations(*report, cot); !v.empty()) return llm::fail("part-coverage", v.front());
            }
            return parsed;
        }));
}

}  // namespace reqforge::agents
