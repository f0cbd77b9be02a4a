#include "reqforge/cot/system_prompt.hpp"

#include "reqforge/common/text.hpp"

namespace reqforge::cot {
namespace {

std::string header(std::size_t i) { return "## " + std::string(kComponentHeadings[i]) + "\n"; }

}  // namespace

std::vector<std::string> completeness_violations(const SystemPromptDraft& draft) {
    std::vector<std::string> out;
    const std::string* fields[] = {&draft.role_definition, &draft.knowledge, &draft.tools, &draft.context_info};
    for (std::size_t i = 0; i < 4; ++i) {
        if (text::trim(*fields[i]).empty()) out.push_back(std::string(kComponentIds[i]) + " is empty");
    }
    if (draft.work_modes.empty()) out.push_back("work_modes is empty");
    for (std::size_t i = 0; i < draft.work_modes.size(); ++i) {
        const auto& m = draft.work_modes[i];
        const auto where = "work mode " + std::to_string(i + 1) + ": ";
        if (text::trim(m.name).empty()) out.push_back(where + "name is empty");
        if (text::trim(m.conduct).empty()) out.push_back(where + "code of conduct is empty");
        if (m.examples.empty()) out.push_back(where + "no examples");
        for (const auto& e : m.examples) {
            if (text::trim(e).empty()) out.push_back(where + "empty example");
        }
    }
    return out;
}

std::string render_work_modes(const std::vector<WorkMode>& modes) {
    std::string out;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (i) out += "\n\n";
        out += "### Mode " + std::to_string(i + 1) + ": " + modes[i].name + "\n";
        out += "Code of conduct: " + modes[i].conduct + "\n";
        out += "Examples:";
        for (const auto& e : modes[i].examples) out += "\n- " + e;
    }
    return out;
}

RenderedComponents component_bodies(const SystemPromptDraft& draft) {
    return {{draft.role_definition, draft.knowledge, draft.tools, draft.context_info, render_work_modes(draft.work_modes)}};
}

std::string assemble_system_prompt(const SystemPromptDraft& draft) {
    const auto bodies = component_bodies(draft);
    std::string out;
    for (std::size_t i = 0; i < bodies.bodies.size(); ++i) {
        if (i) out += "\n\n";
        out += header(i);
        out += bodies.bodies[i];
    }
    if (draft.attached_template) {
        out += "\n\n";
        out += *draft.attached_template;
    }
    return out;
}

std::optional<RenderedComponents> parse_system_prompt(std::string_view rendered,
                                                      const std::optional<std::string>& attached_template) {
    if (attached_template) {
        const auto suffix = "\n\n" + *attached_template;
        if (!rendered.ends_with(suffix)) return std::nullopt;
        rendered.remove_suffix(suffix.size());
    }
    const auto first = header(0);
    if (!rendered.starts_with(first)) return std::nullopt;
    RenderedComponents out;
    std::size_t body_start = first.size();
    for (std::size_t i = 0; i < kComponentIds.size(); ++i) {
        if (i + 1 == kComponentIds.size()) {
            out.bodies[i] = std::string(rendered.substr(body_start));
            break;
        }
        const auto next = "\n\n" + header(i + 1);
        const auto at = rendered.find(next, body_start);
        if (at == std::string_view::npos) return std::nullopt;
        out.bodies[i] = std::string(rendered.substr(body_start, at - body_start));
        body_start = at + next.size();
    }
    return out;
}

llm::Parsed<SystemPromptDraft> parse_system_prompt_draft(const nlohmann::json& j) {
    if (!j.is_object()) return llm::fail("schema", "expected a JSON object");
    SystemPromptDraft d;
    const auto text_field = [&](std::initializer_list<const char*> names, std::string& out) -> bool {
        for (const char* name : names) {
            if (j.contains(name) && j[name].is_string()) {
                out = j[name].get<std::string>();
                return true;
            }
        }
        return false;
    };
    if (!text_field({"role_definition"}, d.role_definition)) return llm::fail("completeness", "missing role_definition");
    if (!text_field({"knowledge"}, d.knowledge)) return llm::fail("completeness", "missing knowledge");
    if (!text_field({"tools"}, d.tools)) return llm::fail("completeness", "missing tools");
    if (!text_field({"context", "context_info"}, d.context_info)) return llm::fail("completeness", "missing context");
    if (!j.contains("work_modes") || !j["work_modes"].is_array()) return llm::fail("completeness", "missing work_modes");
    for (const auto& m : j["work_modes"]) {
        if (!m.is_object()) return llm::fail("schema", "work mode must be an object");
        WorkMode mode;
        if (m.contains("name") && m["name"].is_string()) mode.name = m["name"].get<std::string>();
        if (m.contains("conduct") && m["conduct"].is_string()) mode.conduct = m["conduct"].get<std::string>();
        if (m.contains("examples")) {
            if (!m["examples"].is_array()) return llm::fail("schema", "examples must be a list");
            for (const auto& e : m["examples"]) {
                if (!e.is_string()) return llm::fail("schema", "examples must be strings");
                mode.examples.push_back(e.get<std::string>());
            }
        }
        d.work_modes.push_back(std::move(mode));
    }
    if (auto v = completeness_violations(d); !v.empty()) return llm::fail("completeness", v.front());
    return d;
}

nlohmann::json system_prompt_to_json(const SystemPromptDraft& draft) {
    nlohmann::json modes = nlohmann::json::array();
    for (const auto& m : draft.work_modes) {
        modes.push_back({{"name", m.name}, {"conduct", m.conduct}, {"examples", m.examples}});
    }
    nlohmann::json j = {{"role_definition", draft.role_definition},
                        {"knowledge", draft.knowledge},
                        {"tools", draft.tools},
                        {"context", draft.context_info},
                        {"work_modes", modes}};
    if (draft.attached_template) j["attached_template"] = *draft.attached_template;
    return j;
}

}  // namespace reqforge::cot
