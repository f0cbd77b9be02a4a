#include "reqforge/cot/task_list.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <tuple>

#include "reqforge/common/text.hpp"

namespace reqforge::cot {
namespace {

constexpr std::string_view kCategoryNames[] = {"docs", "env", "code", "entry"};

[[noreturn]] void structure_error(std::string rule, std::vector<std::string> ids, const std::string& message) {
    throw TaskGraphError(TaskGraphError::Kind::Structure, std::move(rule), std::move(ids), message);
}

// Walks unfinished dependencies from the smallest stuck id until a task repeats.
std::vector<std::string> find_cycle(const std::map<std::string, const Task*>& by_id, const std::set<std::string>& stuck) {
    std::vector<std::string> path;
    std::map<std::string, std::size_t> seen;
    std::string at = *stuck.begin();
    while (!seen.count(at)) {
        seen[at] = path.size();
        path.push_back(at);
        const auto& deps = by_id.at(at)->depends_on;
        std::string next;
        for (const auto& d : deps) {
            if (stuck.count(d) && (next.empty() || d < next)) next = d;
        }
        at = next;
    }
    return {path.begin() + static_cast<std::ptrdiff_t>(seen[at]), path.end()};
}

}  // namespace

std::string_view to_string(TaskCategory c) { return kCategoryNames[static_cast<int>(c)]; }

std::optional<TaskCategory> task_category_from_string(std::string_view s) {
    const auto key = text::lower(text::trim(s));
    for (int i = 0; i < 4; ++i) {
        if (key == kCategoryNames[i]) return static_cast<TaskCategory>(i);
    }
    return std::nullopt;
}

int category_rank(TaskCategory c) { return static_cast<int>(c); }

TaskList order_tasks(std::vector<Task> tasks) {
    std::map<std::string, const Task*> by_id;
    for (const auto& t : tasks) {
        if (t.id.empty()) structure_error("empty-id", {}, "task with an empty id");
        if (!by_id.emplace(t.id, &t).second) structure_error("duplicate-id", {t.id}, "duplicate task id " + t.id);
    }
    std::vector<std::string> entries;
    std::map<std::string, int> pending;
    std::map<std::string, std::vector<std::string>> dependents;
    for (const auto& t : tasks) {
        if (t.category == TaskCategory::Entry) entries.push_back(t.id);
        std::set<std::string> unique_deps(t.depends_on.begin(), t.depends_on.end());
        for (const auto& d : unique_deps) {
            auto it = by_id.find(d);
            if (it == by_id.end()) structure_error("unknown-dependency", {t.id, d}, t.id + " depends on unknown task " + d);
            if (it->second->category == TaskCategory::Entry) {
                structure_error("entry-has-dependents", {d, t.id}, "entry task " + d + " is a dependency of " + t.id);
            }
            if (is_setup(t.category) && it->second->category == TaskCategory::Code) {
                structure_error("setup-depends-on-code", {t.id, d},
                                std::string(to_string(t.category)) + " task " + t.id + " depends on code task " + d);
            }
            dependents[d].push_back(t.id);
        }
        pending[t.id] = static_cast<int>(unique_deps.size());
    }
    if (entries.size() != 1) {
        structure_error("entry-count", entries,
                        "expected exactly one entry task, found " + std::to_string(entries.size()));
    }

    using Key = std::tuple<int, std::string>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
    for (const auto& [id, n] : pending) {
        if (n == 0) ready.emplace(category_rank(by_id.at(id)->category), id);
    }
    TaskList out;
    out.tasks.reserve(tasks.size());
    while (!ready.empty()) {
        const auto id = std::get<1>(ready.top());
        ready.pop();
        out.tasks.push_back(*by_id.at(id));
        for (const auto& dep : dependents[id]) {
            if (--pending[dep] == 0) ready.emplace(category_rank(by_id.at(dep)->category), dep);
        }
    }
    if (out.tasks.size() != tasks.size()) {
        std::set<std::string> stuck;
        for (const auto& [id, n] : pending) {
            if (n > 0) stuck.insert(id);
        }
        auto cycle = find_cycle(by_id, stuck);
        auto shown = cycle;
        shown.push_back(cycle.front());
        throw TaskGraphError(TaskGraphError::Kind::Cycle, "cycle", std::move(cycle),
                             "dependency cycle: " + text::join(shown, " -> "));
    }
    return out;
}

ValidationReport validate_task_list(const TaskList& list) {
    ValidationReport report;
    const auto add = [&](std::string rule, std::vector<std::string> ids, std::string detail) {
        report.violations.push_back({std::move(rule), std::move(ids), std::move(detail)});
    };
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < list.tasks.size(); ++i) {
        const auto& t = list.tasks[i];
        if (t.id.empty()) add("empty-id", {}, "task " + std::to_string(i + 1) + " has an empty id");
        if (!index.emplace(t.id, i).second) add("duplicate-id", {t.id}, "id used more than once");
    }
    std::optional<std::size_t> first_code;
    std::vector<std::string> entries;
    for (std::size_t i = 0; i < list.tasks.size(); ++i) {
        const auto& t = list.tasks[i];
        for (const auto& d : t.depends_on) {
            auto it = index.find(d);
            if (it == index.end()) {
                add("unknown-dependency", {t.id, d}, t.id + " depends on unknown task " + d);
            } else if (it->second >= i) {
                add("dependency-order", {t.id, d}, t.id + " comes before its dependency " + d);
            }
        }
        if (t.category == TaskCategory::Code && !first_code) first_code = i;
        if (is_setup(t.category) && first_code) {
            add("setup-after-code", {t.id, list.tasks[*first_code].id},
                std::string(to_string(t.category)) + " task " + t.id + " comes after code task " +
                    list.tasks[*first_code].id);
        }
        if (t.category == TaskCategory::Entry) {
            entries.push_back(t.id);
            if (i + 1 != list.tasks.size()) add("entry-not-last", {t.id}, "entry task " + t.id + " is not last");
        }
    }
    if (entries.size() != 1) {
        add("entry-count", entries, "expected exactly one entry task, found " + std::to_string(entries.size()));
    }
    report.ok = report.violations.empty();
    return report;
}

nlohmann::json task_list_to_json(const TaskList& list) {
    nlohmann::json tasks = nlohmann::json::array();
    for (const auto& t : list.tasks) {
        tasks.push_back({{"id", t.id},
                         {"title", t.title},
                         {"description", t.description},
                         {"depends_on", t.depends_on},
                         {"category", std::string(to_string(t.category))}});
    }
    return {{"tasks", tasks}};
}

llm::Parsed<TaskList> parse_task_list(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("tasks") || !j["tasks"].is_array()) {
        return llm::fail("schema", "expected {\"tasks\": [...]}");
    }
    TaskList list;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < j["tasks"].size(); ++i) {
        const auto& item = j["tasks"][i];
        const auto where = "tasks[" + std::to_string(i) + "]: ";
        if (!item.is_object()) return llm::fail("schema", where + "expected an object");
        const auto text_field = [&](const char* name, std::string& out) -> bool {
            if (!item.contains(name) || !item[name].is_string()) return false;
            out = item[name].get<std::string>();
            return true;
        };
        Task t;
        if (!text_field("id", t.id) || text::trim(t.id).empty()) return llm::fail("schema", where + "missing id");
        t.id = std::string(text::trim(t.id));
        if (!text_field("title", t.title)) return llm::fail("schema", where + "missing title");
        if (!text_field("description", t.description)) return llm::fail("schema", where + "missing description");
        std::string category;
        if (!text_field("category", category)) return llm::fail("schema", where + "missing category");
        auto c = task_category_from_string(category);
        if (!c) return llm::fail("schema", where + "unknown category " + category);
        t.category = *c;
        if (item.contains("depends_on")) {
            if (!item["depends_on"].is_array()) return llm::fail("schema", where + "depends_on must be a list");
            for (const auto& d : item["depends_on"]) {
                if (!d.is_string()) return llm::fail("schema", where + "depends_on entries must be strings");
                t.depends_on.push_back(std::string(text::trim(d.get<std::string>())));
            }
        }
        if (!ids.insert(t.id).second) return llm::fail("duplicate-id", t.id);
        list.tasks.push_back(std::move(t));
    }
    if (list.tasks.empty()) return llm::fail("schema", "task list is empty");
    for (const auto& t : list.tasks) {
        for (const auto& d : t.depends_on) {
            if (!ids.count(d)) return llm::fail("unknown-dependency", t.id + " depends on unknown task " + d);
        }
    }
    return list;
}

std::string render_user_prompt(std::string_view initial_prompt, const TaskList& list) {
    std::string out = "Original request: \"";
    out += text::trim(initial_prompt);
    out += "\". Implement this request by completing the tasks below strictly in the listed order. "
           "Setup tasks come first, every task lists the tasks it depends on, and the entry task is last.\n\n";
    out += "```json\n";
    out += task_list_to_json(list).dump(2);
    out += "\n```\n";
    return out;
}

}  // namespace reqforge::cot
