#include "reqforge/judge/doc_score.hpp"

#include <algorithm>
#include <regex>
#include <stdexcept>

#include "reqforge/agents/knowledge.hpp"
#include "reqforge/common/text.hpp"

namespace reqforge::judge {
namespace {

constexpr std::array<std::string_view, 3> kPrd = {"Completeness", "Clarity", "Cohesiveness"};
constexpr std::array<std::string_view, 3> kSdd = {"Integrity", "Communicativeness", "Consistency"};

const nlohmann::json* find_folded(const nlohmann::json& obj, std::string_view name) {
    if (!obj.is_object()) return nullptr;
    const auto want = text::fold_key(name);
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (text::fold_key(it.key()) == want) return &it.value();
    }
    return nullptr;
}

std::optional<llm::ParseFailure> check_score(std::string_view name, const nlohmann::json& v, int& out) {
    if (!v.is_number_integer()) return llm::fail("score type", std::string(name) + " is not an integer score");
    const auto x = v.get<long long>();
    if (x < kMinDocScore || x > kMaxDocScore) {
        return llm::fail("score range", std::string(name) + " scored " + std::to_string(x) + ", outside 1..5");
    }
    out = static_cast<int>(x);
    return std::nullopt;
}

llm::Parsed<DocScore> scan_text(std::string_view reply, DocKind kind) {
    DocScore s;
    s.kind = kind;
    const std::string haystack(reply);
    const auto& names = criteria_for(kind);
    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::regex pattern("(?:^|[^A-Za-z])" + std::string(names[i]) +
                                     R"(\**\s*[:=]\s*\**\s*([-+]?\d+(?:\.\d+)?)([^\n]*))",
                                 std::regex::icase);
        std::smatch m;
        if (!std::regex_search(haystack, m, pattern)) {
            return llm::fail("missing criterion", "no score for " + std::string(names[i]));
        }
        const auto number = m[1].str();
        if (number.find('.') != std::string::npos) {
            return llm::fail("score type", std::string(names[i]) + " is not an integer score");
        }
        const long long x = std::stoll(number);
        if (x < kMinDocScore || x > kMaxDocScore) {
            return llm::fail("score range", std::string(names[i]) + " scored " + number + ", outside 1..5");
        }
        s.scores[i] = static_cast<int>(x);
        const std::string tail = m[2].str();
        auto rest = text::trim(tail);
        while (!rest.empty() && (rest.front() == '-' || rest.front() == '*' || rest.front() == '/' || rest.front() == ',')) {
            rest = text::trim(rest.substr(1));
        }
        s.justification[i] = std::string(rest);
    }
    return s;
}

}  // namespace

std::string_view to_string(DocKind kind) { return kind == DocKind::PRD ? "prd" : "sdd"; }

std::optional<DocKind> doc_kind_from_string(std::string_view s) {
    const auto key = text::lower(s);
    if (key == "prd") return DocKind::PRD;
    if (key == "sdd") return DocKind::SDD;
    return std::nullopt;
}

const std::array<std::string_view, 3>& criteria_for(DocKind kind) { return kind == DocKind::PRD ? kPrd : kSdd; }

int DocScore::score(std::string_view criterion) const {
    const auto& names = criteria_for(kind);
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (text::fold_key(names[i]) == text::fold_key(criterion)) return scores[i];
    }
    throw std::out_of_range("no criterion " + std::string(criterion) + " for " + std::string(to_string(kind)));
}

llm::Parsed<DocScore> parse_doc_score_json(const nlohmann::json& j, DocKind kind) {
    if (!j.is_object()) return llm::fail("schema", "expected a JSON object");
    const auto* scores = j.contains("scores") ? &j["scores"] : &j;
    const auto* notes = j.contains("justifications") ? &j["justifications"] : nullptr;
    DocScore s;
    s.kind = kind;
    const auto& names = criteria_for(kind);
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto* v = find_folded(*scores, names[i]);
        if (!v) return llm::fail("missing criterion", "no score for " + std::string(names[i]));
        if (v->is_object()) {
            const auto* inner = find_folded(*v, "score");
            if (!inner) return llm::fail("missing criterion", "no score for " + std::string(names[i]));
            if (auto f = check_score(names[i], *inner, s.scores[i])) return *f;
            if (const auto* why = find_folded(*v, "justification"); why && why->is_string()) {
                s.justification[i] = why->get<std::string>();
            }
        } else if (auto f = check_score(names[i], *v, s.scores[i])) {
            return *f;
        }
        if (notes) {
            if (const auto* why = find_folded(*notes, names[i]); why && why->is_string()) {
                s.justification[i] = why->get<std::string>();
            }
        }
    }
    return s;
}

llm::Parsed<DocScore> parse_doc_score_json(const nlohmann::json& j) {
    const auto* scores = j.is_object() && j.contains("scores") ? &j["scores"] : &j;
    const auto mentions = [&](DocKind kind) {
        const auto& names = criteria_for(kind);
        return std::any_of(names.begin(), names.end(), [&](auto n) { return find_folded(*scores, n) != nullptr; });
    };
    const bool prd = mentions(DocKind::PRD);
    const bool sdd = mentions(DocKind::SDD);
    if (prd == sdd) return llm::fail("schema", prd ? "reply mixes PRD and SDD criteria" : "reply names no known criterion");
    return parse_doc_score_json(j, prd ? DocKind::PRD : DocKind::SDD);
}

llm::Parsed<DocScore> parse_doc_score(std::string_view reply, DocKind kind) {
    llm::ChatResponse response;
    response.content = std::string(reply);
    auto parsed = llm::extract_json<DocScore>(response, [kind](const nlohmann::json& j) { return parse_doc_score_json(j, kind); });
    if (auto* f = std::get_if<llm::ParseFailure>(&parsed); f && f->rule == "no-parseable-block") {
        return scan_text(reply, kind);
    }
    return parsed;
}

std::string rubric_text(DocKind kind) {
    return std::string(agents::knowledge_text(kind == DocKind::PRD ? "rubric_prd.txt" : "rubric_sdd.txt"));
}

llm::ChatRequest build_score_request(std::string_view doc, DocKind kind, const std::string& retry_note) {
    const auto& names = criteria_for(kind);
    std::string system = "You evaluate software documents against a fixed rubric. Score strictly and justify every score.\n\n";
    system += rubric_text(kind);
    std::string user = "[request:judge." + std::string(to_string(kind)) + "]\n";
    user += "Evaluation steps:\n"
            "1. Read the whole document.\n"
            "2. For each criterion, list what the document does well and what it misses.\n"
            "3. Give each criterion an integer score from 1 (poor) to 5 (excellent).\n\n";
    user += "Reply with one fenced json block:\n{\"scores\": {";
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) user += ", ";
        user += "\"" + std::string(names[i]) + "\": n";
    }
    user += "}, \"justifications\": {\"<criterion>\": \"...\"}}\n\n";
    user += "Document:\n";
    user += doc;
    if (!retry_note.empty()) {
        user += "\n\nYour previous reply was rejected: " + retry_note + "\nReply again and follow the required format exactly.";
    }
    llm::ChatRequest request;
    request.messages.push_back({llm::Role::System, std::move(system)});
    request.messages.push_back({llm::Role::User, std::move(user)});
    return request;
}

DocScore score_document(std::string_view doc, DocKind kind, llm::Gateway& gateway) {
    if (text::trim(doc).empty()) throw std::invalid_argument("document is empty");
    std::string retry_note;
    std::optional<llm::ParseFailure> last;
    for (int attempt = 1; attempt <= kScoreAttempts; ++attempt) {
        const auto response = gateway.complete(build_score_request(doc, kind, retry_note));
        auto parsed = response.finish_reason == llm::FinishReason::Stop
                          ? parse_doc_score(response.content, kind)
                          : llm::Parsed<DocScore>(llm::fail("finish-reason", "reply did not finish"));
        if (auto* s = std::get_if<DocScore>(&parsed)) return std::move(*s);
        last = std::get<llm::ParseFailure>(std::move(parsed));
        retry_note = last->rule + (last->detail.empty() ? "" : ": " + last->detail);
    }
    throw llm::ParseError(*last);
}

DocScore aggregate_versions(const std::vector<DocScore>& scores) {
    if (scores.empty()) throw std::invalid_argument("aggregate_versions needs at least one score");
    const auto kind = scores.front().kind;
    for (const auto& s : scores) {
        if (s.kind != kind) throw std::invalid_argument("aggregate_versions got PRD and SDD scores together");
    }
    if (scores.size() == 1) return scores.front();
    DocScore out;
    out.kind = kind;
    for (std::size_t i = 0; i < 3; ++i) {
        int best = kMinDocScore - 1;
        for (const auto& s : scores) best = std::max(best, s.scores[i]);
        std::vector<std::string> versions;
        for (std::size_t v = 0; v < scores.size(); ++v) {
            if (scores[v].scores[i] == best) versions.push_back(std::to_string(v + 1));
        }
        out.scores[i] = best;
        out.justification[i] = "from version(s) " + text::join(versions, ", ");
    }
    return out;
}

nlohmann::json doc_score_to_json(const DocScore& score) {
    nlohmann::json criteria = nlohmann::json::array();
    const auto& names = criteria_for(score.kind);
    for (std::size_t i = 0; i < names.size(); ++i) {
        criteria.push_back({{"name", names[i]}, {"score", score.scores[i]}, {"justification", score.justification[i]}});
    }
    return {{"kind", to_string(score.kind)}, {"criteria", criteria}};
}

}  // namespace reqforge::judge
