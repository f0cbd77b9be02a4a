#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace reqforge::cot {

struct TemplateSplit {
    std::string body;
    std::optional<std::string> template_text;  // everything after the first marker

    bool operator==(const TemplateSplit&) const = default;
};

/// An empty marker never matches.
TemplateSplit split_template(std::string_view original, std::string_view marker);

/// Inverse of split_template: body + marker + template, or body alone.
std::string join_template(const TemplateSplit& split, std::string_view marker);

}  // namespace reqforge::cot
