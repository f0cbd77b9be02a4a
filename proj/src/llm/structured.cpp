#include "reqforge/llm/structured.hpp"

#include "reqforge/common/text.hpp"

namespace reqforge::llm {

std::vector<TextSpan> fenced_blocks(std::string_view text) {
    std::vector<TextSpan> out;
    std::size_t pos = 0;
    while (true) {
        const auto open = text.find("```", pos);
        if (open == std::string_view::npos) break;
        // Skip the info string ("json", "JSON", ...) up to the end of the opening line.
        auto body_start = text.find('\n', open + 3);
        if (body_start == std::string_view::npos) break;
        ++body_start;
        const auto close = text.find("```", body_start);
        if (close == std::string_view::npos) break;
        out.push_back({body_start, close - body_start});
        pos = close + 3;
    }
    return out;
}

std::vector<JsonCandidate> json_candidates(std::string_view text) {
    std::vector<JsonCandidate> out;
    for (const auto& span : fenced_blocks(text)) out.push_back({span, true});
    out.push_back({{0, text.size()}, false});
    const auto first = text.find_first_of("{[");
    if (first != std::string_view::npos) {
        const char close = text[first] == '{' ? '}' : ']';
        const auto last = text.rfind(close);
        if (last != std::string_view::npos && last > first && (first != 0 || last + 1 != text.size())) {
            out.push_back({{first, last - first + 1}, false});
        }
    }
    return out;
}

namespace detail {

Parsed<nlohmann::json> first_valid_json(
    std::string_view text, const std::function<std::optional<ParseFailure>(const nlohmann::json&)>& accept) {
    std::optional<ParseFailure> first_schema_failure;
    for (const auto& candidate : json_candidates(text)) {
        const auto body = text.substr(candidate.span.offset, candidate.span.length);
        auto parsed = nlohmann::json::parse(body.begin(), body.end(), nullptr, /*allow_exceptions=*/false);
        if (parsed.is_discarded()) continue;
        auto failure = accept(parsed);
        if (!failure) return parsed;
        if (!first_schema_failure) {
            failure->span = candidate.span;
            failure->excerpt = text::excerpt(body);
            first_schema_failure = std::move(*failure);
        }
    }
    if (first_schema_failure) return *first_schema_failure;
    return ParseFailure{"no-parseable-block", "no parseable JSON block found", {0, text.size()}, text::excerpt(text)};
}

}  // namespace detail

}  // namespace reqforge::llm
