#pragma once

#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "reqforge/common/prompt_kind.hpp"
#include "reqforge/cot/system_prompt.hpp"
#include "reqforge/cot/task_list.hpp"

namespace reqforge::cot {

/// Specification-stage output: a task list for user prompts, a draft for system prompts.
struct ChainOfThought {
    std::variant<TaskList, SystemPromptDraft> body;

    PromptKind kind() const noexcept {
        return std::holds_alternative<TaskList>(body) ? PromptKind::UserPrompt : PromptKind::SystemPrompt;
    }
    const TaskList* task_list() const noexcept { return std::get_if<TaskList>(&body); }
    const SystemPromptDraft* system_prompt() const noexcept { return std::get_if<SystemPromptDraft>(&body); }

    bool operator==(const ChainOfThought&) const = default;
};

/// Task ids in list order, or the five component ids.
std::vector<std::string> part_ids(const ChainOfThought& cot);

/// Each part labelled with its id, for the Critic and for human review.
std::string render_for_review(const ChainOfThought& cot);

nlohmann::json chain_to_json(const ChainOfThought& cot);
ChainOfThought chain_from_json(const nlohmann::json& j);

}  // namespace reqforge::cot
