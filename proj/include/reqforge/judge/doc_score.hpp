#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "reqforge/llm/gateway.hpp"
#include "reqforge/llm/structured.hpp"

namespace reqforge::judge {

enum class DocKind { PRD, SDD };

std::string_view to_string(DocKind kind);  // "prd" / "sdd"
std::optional<DocKind> doc_kind_from_string(std::string_view s);

/// Criterion names in rubric order.
const std::array<std::string_view, 3>& criteria_for(DocKind kind);

inline constexpr int kMinDocScore = 1;
inline constexpr int kMaxDocScore = 5;

struct DocScore {
    DocKind kind = DocKind::PRD;
    std::array<int, 3> scores{};  // indexed like criteria_for(kind)
    std::array<std::string, 3> justification;

    int score(std::string_view criterion) const;

    bool operator==(const DocScore&) const = default;
};

/// Accepts {"scores": {...}, "justifications": {...}}, {"<Criterion>": n | {"score", "justification"}},
/// or lines of the form "<Criterion>: n". Scores outside [1,5] and non-integers are rejected, never clamped.
llm::Parsed<DocScore> parse_doc_score(std::string_view reply, DocKind kind);
llm::Parsed<DocScore> parse_doc_score_json(const nlohmann::json& j, DocKind kind);

/// Kind inferred from the criterion names in the reply.
llm::Parsed<DocScore> parse_doc_score_json(const nlohmann::json& j);

std::string rubric_text(DocKind kind);
llm::ChatRequest build_score_request(std::string_view doc, DocKind kind, const std::string& retry_note = {});

inline constexpr int kScoreAttempts = 3;

/// One rubric call per document, regenerated on unusable replies up to kScoreAttempts times.
/// Throws llm::ParseError carrying the last failure, or std::invalid_argument for an empty document.
DocScore score_document(std::string_view doc, DocKind kind, llm::Gateway& gateway);

/// Element-wise maximum; the justification names the versions (1-based) that reached it.
/// Throws std::invalid_argument for an empty list or mixed kinds.
DocScore aggregate_versions(const std::vector<DocScore>& scores);

nlohmann::json doc_score_to_json(const DocScore& score);

}  // namespace reqforge::judge
