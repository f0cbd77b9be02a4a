#include "reqforge/agents/srs.hpp"

#include <set>

#include "reqforge/agents/prompts.hpp"
#include "reqforge/common/text.hpp"

namespace reqforge::agents {

std::vector<std::string> srs_shape_violations(const SrsDraft& draft) {
    std::vector<std::string> out;
    if (draft.sections.empty()) out.push_back("specification has no sections");
    std::set<std::string> headings;
    for (const auto& s : draft.sections) {
        if (text::trim(s.heading).empty()) out.push_back("section with an empty heading");
        if (!headings.insert(s.heading).second) out.push_back("duplicate heading \"" + s.heading + "\"");
        for (int id : s.source_turn_ids) {
            if (id < 1) out.push_back("section \"" + s.heading + "\" cites turn " + std::to_string(id));
        }
    }
    return out;
}

std::vector<std::string> srs_violations(const SrsDraft& draft, const InterviewRecord& record) {
    auto out = srs_shape_violations(draft);
    std::set<int> cited;
    for (const auto& s : draft.sections) {
        for (int id : s.source_turn_ids) {
            if (!record.contains_turn(id)) {
                out.push_back("section \"" + s.heading + "\" cites unknown turn " + std::to_string(id));
            }
            cited.insert(id);
        }
    }
    for (const auto& t : record.turns()) {
        if (!cited.count(t.id)) out.push_back("turn " + std::to_string(t.id) + " is not traced by any section");
    }
    return out;
}

std::string render_srs(const SrsDraft& draft) {
    std::string out;
    for (std::size_t i = 0; i < draft.sections.size(); ++i) {
        const auto& s = draft.sections[i];
        if (i) out += "\n";
        out += "## " + s.heading + "\n";
        out += s.body;
        if (!s.body.empty() && s.body.back() != '\n') out += "\n";
        if (!s.source_turn_ids.empty()) {
            std::vector<std::string> ids;
            for (int id : s.source_turn_ids) ids.push_back(std::to_string(id));
            out += "Sources: turns " + text::join(ids, ", ") + "\n";
        }
    }
    return out;
}

llm::Parsed<SrsDraft> parse_srs_sections(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("sections") || !j["sections"].is_array()) {
        return llm::fail("schema", "expected {\"sections\": [...]}");
    }
    SrsDraft draft;
    for (std::size_t i = 0; i < j["sections"].size(); ++i) {
        const auto& item = j["sections"][i];
        const auto where = "sections[" + std::to_string(i) + "]: ";
        if (!item.is_object()) return llm::fail("schema", where + "expected an object");
        SrsSection s;
        if (!item.contains("heading") || !item["heading"].is_string()) return llm::fail("schema", where + "missing heading");
        s.heading = std::string(text::trim(item["heading"].get<std::string>()));
        if (!item.contains("body") || !item["body"].is_string()) return llm::fail("schema", where + "missing body");
        s.body = item["body"].get<std::string>();
        if (item.contains("source_turns")) {
            if (!item["source_turns"].is_array()) return llm::fail("schema", where + "source_turns must be a list");
            for (const auto& id : item["source_turns"]) {
                if (!id.is_number_integer()) return llm::fail("schema", where + "turn ids must be integers");
                s.source_turn_ids.push_back(id.get<int>());
            }
        }
        draft.sections.push_back(std::move(s));
    }
    if (auto v = srs_shape_violations(draft); !v.empty()) return llm::fail("schema", v.front());
    return draft;
}

llm::ChatRequest build_srs_request(const InterviewRecord& record, const ScenarioContext& ctx,
                                   const GenerationNotes& notes) {
    std::string user = request_tag("interviewer.srs");
    user += "\nInitial prompt:\n" + ctx.initial_prompt + "\n\n";
    user += "Interview record:\n" + render_record(record) + "\n";
    user += "Draft the requirements specification. Use these section headings unless the record calls for others:\n";
    for (auto h : kDefaultSrsSkeleton) user += "- " + std::string(h) + "\n";
    user += "\nEvery section lists the interview turns it draws on, and every turn is cited at least once.\n"
            "Reply with one fenced json block:\n"
            "{\"sections\": [{\"heading\": \"...\", \"body\": \"...\", \"source_turns\": [1, 2]}]}";
    llm::ChatRequest request;
    request.messages.push_back({llm::Role::System, build_agent_prompt(AgentRole::Interviewer, ctx)});
    request.messages.push_back({llm::Role::User, append_notes(std::move(user), notes)});
    return request;
}

SrsDraft draft_srs(const InterviewRecord& record, const ScenarioContext& ctx, llm::Gateway& gateway,
                   const GenerationNotes& notes) {
    const auto response = gateway.complete(build_srs_request(record, ctx, notes));
    return llm::value_or_throw(llm::extract_json<SrsDraft>(response, [&](const nlohmann::json& j) -> llm::Parsed<SrsDraft> {
        auto parsed = parse_srs_sections(j);
        if (auto* draft = std::get_if<SrsDraft>(&parsed)) {
            if (auto v = srs_violations(*draft, record); !v.empty()) return llm::fail("traceability", v.front());
        }
        return parsed;
    }));
}

SrsDraft wrap_record_as_srs(const InterviewRecord& record, const ScenarioContext& ctx) {
    SrsSection s;
    s.heading = "Interview Record";
    s.body = "Initial prompt:\n" + ctx.initial_prompt + "\n\n" + render_record(record);
    for (const auto& t : record.turns()) s.source_turn_ids.push_back(t.id);
    return SrsDraft{{std::move(s)}};
}

}  // namespace reqforge::agents
