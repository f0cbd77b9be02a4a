#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "reqforge/agents/context.hpp"
#include "reqforge/agents/requirements.hpp"
#include "reqforge/common/notes.hpp"
#include "reqforge/llm/gateway.hpp"

namespace reqforge::agents {

/// Interview steps in the order they must be visited.
enum class InterviewStep { Components, CoreFunctions, EnhancementsAndScope, FrontEnd, UserGuidance };

inline constexpr std::array<InterviewStep, 5> kAllSteps = {InterviewStep::Components, InterviewStep::CoreFunctions,
                                                          InterviewStep::EnhancementsAndScope, InterviewStep::FrontEnd,
                                                          InterviewStep::UserGuidance};

std::string_view to_string(InterviewStep step);
std::optional<InterviewStep> interview_step_from_string(std::string_view s);
std::string_view step_title(InterviewStep step);

struct InterviewQuestion {
    InterviewStep step = InterviewStep::Components;
    std::string text;
    std::string purpose;

    bool operator==(const InterviewQuestion&) const = default;
};

struct InterviewTurn {
    int id = 0;  // 1-based, consecutive
    InterviewQuestion question;
    std::vector<RequirementStatement> answers;

    bool operator==(const InterviewTurn&) const = default;
};

/// Ordered Q/A turns. Steps never decrease and every turn carries at least one answer.
class InterviewRecord {
public:
    InterviewRecord() = default;

    /// Validates the whole list. Throws std::invalid_argument.
    static InterviewRecord from_turns(std::vector<InterviewTurn> turns);

    /// Appends a turn and returns its id. Throws std::invalid_argument on a step regression,
    /// an empty answer list or an invalid statement; the record is unchanged then.
    int append(InterviewQuestion question, std::vector<RequirementStatement> answers);

    const std::vector<InterviewTurn>& turns() const noexcept { return turns_; }
    bool empty() const noexcept { return turns_.empty(); }
    std::size_t size() const noexcept { return turns_.size(); }
    bool contains_turn(int id) const noexcept { return id >= 1 && id <= static_cast<int>(turns_.size()); }

    bool operator==(const InterviewRecord&) const = default;

private:
    std::vector<InterviewTurn> turns_;
};

std::vector<std::string> record_violations(const std::vector<InterviewTurn>& turns);

/// Plain-text rendering used inside prompts and for the review console.
std::string render_record(const InterviewRecord& record);

struct InterviewOptions {
    int question_budget = 3;  // per step, 1..10
    bool user_guidance = false;
};

InterviewStep final_step(const InterviewOptions& options);

struct StepComplete {
    InterviewStep step;
    bool operator==(const StepComplete&) const = default;
};
struct InterviewComplete {
    bool operator==(const InterviewComplete&) const = default;
};

using InterviewOutcome = std::variant<InterviewQuestion, StepComplete, InterviewComplete>;

/// Step of the last turn, or Components for an empty record.
InterviewStep current_step(const InterviewRecord& record);

/// Asks the Interviewer for the next question of `step`. Returns StepComplete (or InterviewComplete
/// on the final step) without calling the model once the step's budget is used up.
/// Throws llm::ParseError for unusable replies and llm::GatewayError for transport problems.
InterviewOutcome next_interview_question(const InterviewRecord& record, InterviewStep step,
                                         const ScenarioContext& ctx, const InterviewOptions& options,
                                         llm::Gateway& gateway, const GenerationNotes& notes = {});
InterviewOutcome next_interview_question(const InterviewRecord& record, const ScenarioContext& ctx,
                                         const InterviewOptions& options, llm::Gateway& gateway,
                                         const GenerationNotes& notes = {});

/// Interviewee reply: a non-empty list of template-conforming statements.
std::vector<RequirementStatement> answer_question(const InterviewQuestion& question, const ScenarioContext& ctx,
                                                  llm::Gateway& gateway, const GenerationNotes& notes = {});

/// Runs every step until InterviewComplete.
InterviewRecord conduct_interview(const ScenarioContext& ctx, const InterviewOptions& options,
                                  llm::Gateway& gateway, const GenerationNotes& notes = {});

struct InterviewerReply {
    std::optional<InterviewQuestion> question;  // nullopt: the Interviewer closed the step
};

/// {"status": "question", "question": "...", "purpose": "..."} or {"status": "step_complete"}
llm::Parsed<InterviewerReply> parse_interviewer_reply(const nlohmann::json& j, InterviewStep step);

llm::ChatRequest build_question_request(const InterviewRecord& record, InterviewStep step,
                                        const ScenarioContext& ctx, const InterviewOptions& options,
                                        const GenerationNotes& notes);
llm::ChatRequest build_answer_request(const InterviewQuestion& question, const ScenarioContext& ctx,
                                      const GenerationNotes& notes);

}  // namespace reqforge::agents
