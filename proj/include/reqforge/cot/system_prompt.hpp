#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "reqforge/llm/structured.hpp"

namespace reqforge::cot {

struct WorkMode {
    std::string name;
    std::string conduct;
    std::vector<std::string> examples;

    bool operator==(const WorkMode&) const = default;
};

struct SystemPromptDraft {
    std::string role_definition;
    std::string knowledge;
    std::string tools;
    std::string context_info;
    std::vector<WorkMode> work_modes;
    std::optional<std::string> attached_template;  // re-attached verbatim after the five components

    bool operator==(const SystemPromptDraft&) const = default;
};

/// Part ids, also used as critique score keys.
inline constexpr std::array<std::string_view, 5> kComponentIds = {"role_definition", "knowledge", "tools",
                                                                  "context", "work_modes"};
inline constexpr std::array<std::string_view, 5> kComponentHeadings = {"Role Definition", "Knowledge", "Tools",
                                                                       "Context", "Work Modes"};

/// Empty components, no work modes, or a work mode with an empty field or no example.
std::vector<std::string> completeness_violations(const SystemPromptDraft& draft);

std::string render_work_modes(const std::vector<WorkMode>& modes);

/// Five "## <Heading>" sections in fixed order, then the attached template, byte for byte.
std::string assemble_system_prompt(const SystemPromptDraft& draft);

struct RenderedComponents {
    std::array<std::string, 5> bodies;  // indexed like kComponentIds

    bool operator==(const RenderedComponents&) const = default;
};

/// Splits an assembled prompt back into its five bodies. `attached_template` must be what
/// was attached. Returns nullopt when the text is not an assembled prompt.
std::optional<RenderedComponents> parse_system_prompt(std::string_view rendered,
                                                      const std::optional<std::string>& attached_template);

RenderedComponents component_bodies(const SystemPromptDraft& draft);

/// {"role_definition", "knowledge", "tools", "context", "work_modes": [{"name", "conduct", "examples"}]}
/// including the completeness check.
llm::Parsed<SystemPromptDraft> parse_system_prompt_draft(const nlohmann::json& j);

nlohmann::json system_prompt_to_json(const SystemPromptDraft& draft);

}  // namespace reqforge::cot
