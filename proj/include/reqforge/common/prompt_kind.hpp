#pragma once

#include <optional>
#include <string_view>

namespace reqforge {

/// Which message role the session is refining. Fixed for a session's lifetime.
enum class PromptKind { UserPrompt, SystemPrompt };

constexpr std::string_view to_string(PromptKind kind) {
    return kind == PromptKind::UserPrompt ? "user" : "system";
}

constexpr std::optional<PromptKind> prompt_kind_from_string(std::string_view s) {
    if (s == "user") return PromptKind::UserPrompt;
    if (s == "system") return PromptKind::SystemPrompt;
    return std::nullopt;
}

}  // namespace reqforge
