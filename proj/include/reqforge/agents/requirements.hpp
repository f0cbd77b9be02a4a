#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "reqforge/llm/structured.hpp"

namespace reqforge::agents {

enum class RequirementTemplate { OverallSystem, ComponentConstant, ComponentConditional };

std::string_view to_string(RequirementTemplate t);
std::optional<RequirementTemplate> requirement_template_from_string(std::string_view s);

/// One partially structured requirement. `condition` is set exactly for ComponentConditional.
struct RequirementStatement {
    RequirementTemplate kind = RequirementTemplate::OverallSystem;
    std::string subject;
    std::string statement;
    std::optional<std::string> condition;

    bool operator==(const RequirementStatement&) const = default;
};

std::vector<std::string> statement_violations(const RequirementStatement& r);

/// Line form of the three templates:
///   [overall] <subject> shall <statement>
///   [component] <subject> shall <statement>
///   [conditional] When <condition>, <subject> shall <statement>
/// Subjects contain neither ", " nor " shall "; conditions contain no " shall ".
std::string render_requirement(const RequirementStatement& r);
llm::Parsed<RequirementStatement> parse_requirement(std::string_view line);

/// {"requirements": [ "<line form>" | {"template", "subject", "statement", "condition"} ... ]}
llm::Parsed<std::vector<RequirementStatement>> parse_requirement_batch(const nlohmann::json& j);

}  // namespace reqforge::agents
