#pragma once

#include <string>
#include <string_view>

#include "reqforge/agents/context.hpp"

namespace reqforge::agents {

/// Team intro, scenario description, role instructions, then the role's knowledge excerpts.
/// Pure: the same role and context always give the same text.
std::string build_agent_prompt(AgentRole role, const ScenarioContext& ctx);

std::string_view role_instructions(AgentRole role);

/// First line of every task message, used by scripted transcripts to route replies.
std::string request_tag(std::string_view task);

}  // namespace reqforge::agents
