#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reqforge/common/prompt_kind.hpp"

namespace reqforge::agents {

enum class AgentRole { Interviewer, Interviewee, CoTer, Critic };

inline constexpr std::array<AgentRole, 4> kAllRoles = {AgentRole::Interviewer, AgentRole::Interviewee,
                                                      AgentRole::CoTer, AgentRole::Critic};

std::string_view to_string(AgentRole role);

/// Globally shared context every agent prompt starts with.
struct ScenarioContext {
    std::string team_intro;
    std::string scenario_description;
    PromptKind prompt_kind = PromptKind::UserPrompt;
    std::string initial_prompt;

    bool operator==(const ScenarioContext&) const = default;
};

std::vector<std::string> context_violations(const ScenarioContext& ctx);

/// Context built from the bundled team introduction and the scenario text for `kind`.
ScenarioContext default_context(PromptKind kind, std::string initial_prompt);

}  // namespace reqforge::agents
