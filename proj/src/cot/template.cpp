#include "reqforge/cot/template.hpp"

namespace reqforge::cot {

TemplateSplit split_template(std::string_view original, std::string_view marker) {
    if (marker.empty()) return {std::string(original), std::nullopt};
    const auto at = original.find(marker);
    if (at == std::string_view::npos) return {std::string(original), std::nullopt};
    return {std::string(original.substr(0, at)), std::string(original.substr(at + marker.size()))};
}

std::string join_template(const TemplateSplit& split, std::string_view marker) {
    if (!split.template_text) return split.body;
    std::string out = split.body;
    out += marker;
    out += *split.template_text;
    return out;
}

}  // namespace reqforge::cot
