#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "reqforge/llm/structured.hpp"

namespace reqforge::cot {

/// Docs and Env are setup work and run before any Code; the single Entry task runs last.
enum class TaskCategory { Docs, Env, Code, Entry };

std::string_view to_string(TaskCategory c);
std::optional<TaskCategory> task_category_from_string(std::string_view s);
int category_rank(TaskCategory c);
inline bool is_setup(TaskCategory c) { return c == TaskCategory::Docs || c == TaskCategory::Env; }

struct Task {
    std::string id;
    std::string title;
    std::string description;
    std::vector<std::string> depends_on;
    TaskCategory category = TaskCategory::Code;

    bool operator==(const Task&) const = default;
};

struct TaskList {
    std::vector<Task> tasks;

    bool operator==(const TaskList&) const = default;
};

class TaskGraphError : public std::runtime_error {
public:
    enum class Kind { Cycle, Structure };

    TaskGraphError(Kind kind, std::string rule, std::vector<std::string> task_ids, const std::string& message)
        : std::runtime_error(message), kind_(kind), rule_(std::move(rule)), task_ids_(std::move(task_ids)) {}

    Kind kind() const noexcept { return kind_; }
    const std::string& rule() const noexcept { return rule_; }
    /// For cycles: the ids along one cycle, in dependency order.
    const std::vector<std::string>& task_ids() const noexcept { return task_ids_; }

private:
    Kind kind_;
    std::string rule_;
    std::vector<std::string> task_ids_;
};

/// Deterministic dependency order. Among ready tasks the lower category rank goes first,
/// then the lexicographically smaller id. Throws TaskGraphError for cycles, duplicate or
/// dangling ids, zero or several Entry tasks, an Entry task with dependents, and setup
/// tasks that depend on code.
TaskList order_tasks(std::vector<Task> tasks);

struct Violation {
    std::string rule;
    std::vector<std::string> task_ids;
    std::string detail;

    bool operator==(const Violation&) const = default;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
};

/// Total: checks every TaskList invariant and lists each breach found.
ValidationReport validate_task_list(const TaskList& list);

nlohmann::json task_list_to_json(const TaskList& list);

/// Field and reference rules only; the order of the reply is kept as given.
llm::Parsed<TaskList> parse_task_list(const nlohmann::json& j);

/// Final user prompt: a one-paragraph preamble, then the task list as a JSON block.
std::string render_user_prompt(std::string_view initial_prompt, const TaskList& list);

}  // namespace reqforge::cot
