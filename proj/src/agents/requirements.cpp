#include "reqforge/agents/requirements.hpp"

#include "reqforge/common/text.hpp"

namespace reqforge::agents {
namespace {

constexpr std::string_view kShall = " shall ";

struct TagInfo {
    RequirementTemplate kind;
    std::string_view tag;
    std::string_view name;
};

constexpr TagInfo kTags[] = {
    {RequirementTemplate::OverallSystem, "[overall]", "overall_system"},
    {RequirementTemplate::ComponentConstant, "[component]", "component_constant"},
    {RequirementTemplate::ComponentConditional, "[conditional]", "component_conditional"},
};

const TagInfo& info(RequirementTemplate t) {
    for (const auto& i : kTags) {
        if (i.kind == t) return i;
    }
    return kTags[0];
}

}  // namespace

std::string_view to_string(RequirementTemplate t) { return info(t).name; }

std::optional<RequirementTemplate> requirement_template_from_string(std::string_view s) {
    const auto key = text::fold_key(s);
    for (const auto& i : kTags) {
        if (key == text::fold_key(i.name) || key == text::fold_key(i.tag)) return i.kind;
    }
    if (key == "overall") return RequirementTemplate::OverallSystem;
    if (key == "constant") return RequirementTemplate::ComponentConstant;
    return std::nullopt;
}

std::vector<std::string> statement_violations(const RequirementStatement& r) {
    std::vector<std::string> out;
    const auto subject = text::trim(r.subject);
    if (subject.empty()) out.push_back("subject is empty");
    if (text::trim(r.statement).empty()) out.push_back("statement is empty");
    if (subject != r.subject) out.push_back("subject has surrounding whitespace");
    if (r.subject.find(", ") != std::string::npos) out.push_back("subject contains \", \"");
    if (r.subject.find(kShall) != std::string::npos) out.push_back("subject contains \" shall \"");
    if (r.statement != text::trim(r.statement)) out.push_back("statement has surrounding whitespace");
    if (r.kind == RequirementTemplate::ComponentConditional) {
        if (!r.condition || text::trim(*r.condition).empty()) {
            out.push_back("conditional requirement without a condition");
        } else {
            if (*r.condition != text::trim(*r.condition)) out.push_back("condition has surrounding whitespace");
            if (r.condition->find(kShall) != std::string::npos) out.push_back("condition contains \" shall \"");
        }
    } else {
        if (r.condition) out.push_back("condition given for a non-conditional requirement");
        // The line form would read back as a conditional.
        if (text::starts_with_icase(r.subject, "when ")) out.push_back("subject starts with \"When\"");
    }
    if (r.subject.find('\n') != std::string::npos || r.statement.find('\n') != std::string::npos ||
        (r.condition && r.condition->find('\n') != std::string::npos)) {
        out.push_back("requirement spans several lines");
    }
    return out;
}

std::string render_requirement(const RequirementStatement& r) {
    std::string out(info(r.kind).tag);
    out += ' ';
    if (r.kind == RequirementTemplate::ComponentConditional) {
        out += "When " + r.condition.value_or("") + ", ";
    }
    out += r.subject;
    out += kShall;
    out += r.statement;
    return out;
}

llm::Parsed<RequirementStatement> parse_requirement(std::string_view line) {
    const auto trimmed = text::trim(line);
    const TagInfo* tag = nullptr;
    for (const auto& i : kTags) {
        if (text::starts_with_icase(trimmed, i.tag)) tag = &i;
    }
    if (!tag) return llm::fail("unknown-template", "line does not start with [overall], [component] or [conditional]");
    auto rest = text::trim(trimmed.substr(tag->tag.size()));

    const auto shall = rest.find(kShall);
    if (shall == std::string_view::npos) return llm::fail("missing-shall", std::string(text::excerpt(rest)));

    RequirementStatement r;
    r.kind = tag->kind;
    auto head = rest.substr(0, shall);
    r.statement = std::string(text::trim(rest.substr(shall + kShall.size())));

    if (tag->kind == RequirementTemplate::ComponentConditional) {
        if (!text::starts_with_icase(head, "when ")) {
            return llm::fail("missing-condition", "conditional requirement must start with \"When <condition>,\"");
        }
        head.remove_prefix(5);
        const auto comma = head.rfind(", ");
        if (comma == std::string_view::npos) return llm::fail("missing-condition", "no \", \" after the condition");
        r.condition = std::string(text::trim(head.substr(0, comma)));
        r.subject = std::string(text::trim(head.substr(comma + 2)));
    } else {
        r.subject = std::string(text::trim(head));
    }

    if (auto v = statement_violations(r); !v.empty()) return llm::fail("template", v.front());
    return r;
}

llm::Parsed<std::vector<RequirementStatement>> parse_requirement_batch(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("requirements") || !j["requirements"].is_array()) {
        return llm::fail("schema", "expected {\"requirements\": [...]}");
    }
    std::vector<RequirementStatement> out;
    for (std::size_t i = 0; i < j["requirements"].size(); ++i) {
        const auto& item = j["requirements"][i];
        const auto where = "requirements[" + std::to_string(i) + "]: ";
        if (item.is_string()) {
            auto parsed = parse_requirement(item.get<std::string>());
            if (auto* f = std::get_if<llm::ParseFailure>(&parsed)) {
                return llm::fail(f->rule, where + f->detail);
            }
            out.push_back(std::get<RequirementStatement>(std::move(parsed)));
            continue;
        }
        if (!item.is_object()) return llm::fail("schema", where + "expected a string or an object");
        const auto field = [&](const char* name) -> std::optional<std::string> {
            if (!item.contains(name) || !item[name].is_string()) return std::nullopt;
            return item[name].get<std::string>();
        };
        const auto kind_text = field("template");
        if (!kind_text) return llm::fail("schema", where + "missing template");
        const auto kind = requirement_template_from_string(*kind_text);
        if (!kind) return llm::fail("unknown-template", where + *kind_text);
        RequirementStatement r;
        r.kind = *kind;
        r.subject = field("subject").value_or("");
        r.statement = field("statement").value_or("");
        r.condition = field("condition");
        if (r.condition && r.kind != RequirementTemplate::ComponentConditional && r.condition->empty()) {
            r.condition.reset();
        }
        if (auto v = statement_violations(r); !v.empty()) {
            const bool missing_condition = r.kind == RequirementTemplate::ComponentConditional &&
                                           (!r.condition || text::trim(*r.condition).empty());
            return llm::fail(missing_condition ? "missing-condition" : "template", where + v.front());
        }
        out.push_back(std::move(r));
    }
    if (out.empty()) return llm::fail("empty-answer", "reply holds no requirement");
    return out;
}

}  // namespace reqforge::agents
