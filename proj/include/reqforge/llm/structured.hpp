#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "reqforge/llm/chat.hpp"

namespace reqforge::llm {

struct TextSpan {
    std::size_t offset = 0;
    std::size_t length = 0;

    bool operator==(const TextSpan&) const = default;
};

/// Why a reply was not accepted: the first violated rule and where it was found.
struct ParseFailure {
    std::string rule;
    std::string detail;
    TextSpan span;
    std::string excerpt;

    bool operator==(const ParseFailure&) const = default;
};

template <class T>
using Parsed = std::variant<T, ParseFailure>;

template <class T>
bool ok(const Parsed<T>& p) {
    return std::holds_alternative<T>(p);
}

inline ParseFailure fail(std::string rule, std::string detail = {}) {
    return ParseFailure{std::move(rule), std::move(detail), {}, {}};
}

/// Thrown by agent operations when a reply stays unusable; the pipeline's retry loop catches it.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(ParseFailure failure)
        : std::runtime_error(failure.rule + (failure.detail.empty() ? "" : ": " + failure.detail)),
          failure_(std::move(failure)) {}

    const ParseFailure& failure() const noexcept { return failure_; }

private:
    ParseFailure failure_;
};

template <class T>
T value_or_throw(Parsed<T> p) {
    if (auto* f = std::get_if<ParseFailure>(&p)) throw ParseError(*f);
    return std::get<T>(std::move(p));
}

/// Spans of the bodies of ``` fenced blocks, in order of appearance.
std::vector<TextSpan> fenced_blocks(std::string_view text);

struct JsonCandidate {
    TextSpan span;
    bool fenced = false;
};

/// Places to look for JSON: every fenced block, then the whole message, then the
/// outermost {...} or [...] span.
std::vector<JsonCandidate> json_candidates(std::string_view text);

template <class T>
using JsonValidator = std::function<Parsed<T>(const nlohmann::json&)>;

namespace detail {
Parsed<nlohmann::json> first_valid_json(std::string_view text,
                                        const std::function<std::optional<ParseFailure>(const nlohmann::json&)>& accept);
}

/// Scans `json_candidates` in order and returns the first one the validator accepts.
/// Never throws. When nothing parses as JSON the rule is "no-parseable-block"; otherwise
/// the failure of the first candidate that parsed but broke the schema.
template <class T>
Parsed<T> extract_json(const ChatResponse& response, const JsonValidator<T>& validate) {
    if (response.finish_reason != FinishReason::Stop) {
        return fail("finish-reason", "reply finished with " + std::string(to_string(response.finish_reason)));
    }
    std::optional<T> accepted;
    auto found = detail::first_valid_json(response.content, [&](const nlohmann::json& j) -> std::optional<ParseFailure> {
        try {
            auto parsed = validate(j);
            if (auto* failure = std::get_if<ParseFailure>(&parsed)) return *failure;
            accepted = std::get<T>(std::move(parsed));
            return std::nullopt;
        } catch (const std::exception& e) {
            return fail("schema", e.what());
        }
    });
    if (auto* failure = std::get_if<ParseFailure>(&found)) return *failure;
    return std::move(*accepted);
}

}  // namespace reqforge::llm
