#include "reqforge/cot/chain.hpp"

#include <stdexcept>

#include "reqforge/common/text.hpp"

namespace reqforge::cot {

std::vector<std::string> part_ids(const ChainOfThought& cot) {
    std::vector<std::string> out;
    if (const auto* list = cot.task_list()) {
        for (const auto& t : list->tasks) out.push_back(t.id);
    } else {
        for (auto id : kComponentIds) out.emplace_back(id);
    }
    return out;
}

std::string render_for_review(const ChainOfThought& cot) {
    std::string out;
    if (const auto* list = cot.task_list()) {
        for (const auto& t : list->tasks) {
            out += "[part " + t.id + "] (" + std::string(to_string(t.category)) + ") " + t.title + "\n";
            if (!t.depends_on.empty()) out += "  depends on: " + text::join(t.depends_on, ", ") + "\n";
            out += "  " + t.description + "\n";
        }
        return out;
    }
    const auto bodies = component_bodies(*cot.system_prompt());
    for (std::size_t i = 0; i < kComponentIds.size(); ++i) {
        out += "[part " + std::string(kComponentIds[i]) + "]\n" + bodies.bodies[i] + "\n\n";
    }
    return out;
}

nlohmann::json chain_to_json(const ChainOfThought& cot) {
    if (const auto* list = cot.task_list()) return {{"kind", "user"}, {"task_list", task_list_to_json(*list)}};
    return {{"kind", "system"}, {"system_prompt", system_prompt_to_json(*cot.system_prompt())}};
}

ChainOfThought chain_from_json(const nlohmann::json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "user") {
        auto parsed = parse_task_list(j.at("task_list"));
        if (auto* f = std::get_if<llm::ParseFailure>(&parsed)) throw std::runtime_error("task list: " + f->detail);
        return {std::get<TaskList>(std::move(parsed))};
    }
    if (kind == "system") {
        const auto& body = j.at("system_prompt");
        auto parsed = parse_system_prompt_draft(body);
        if (auto* f = std::get_if<llm::ParseFailure>(&parsed)) throw std::runtime_error("system prompt: " + f->detail);
        auto draft = std::get<SystemPromptDraft>(std::move(parsed));
        if (body.contains("attached_template")) draft.attached_template = body["attached_template"].get<std::string>();
        return {std::move(draft)};
    }
    throw std::runtime_error("unknown chain kind " + kind);
}

}  // namespace reqforge::cot
