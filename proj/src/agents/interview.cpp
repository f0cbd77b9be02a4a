#include "reqforge/agents/interview.hpp"

#include <algorithm>
#include <stdexcept>

#include "reqforge/agents/prompts.hpp"
#include "reqforge/common/text.hpp"

namespace reqforge::agents {
namespace {

struct StepInfo {
    InterviewStep step;
    std::string_view key;
    std::string_view title;
};

constexpr StepInfo kSteps[] = {
    {InterviewStep::Components, "components", "Components"},
    {InterviewStep::CoreFunctions, "core_functions", "Core functions"},
    {InterviewStep::EnhancementsAndScope, "enhancements_and_scope", "Enhancements and scope"},
    {InterviewStep::FrontEnd, "front_end", "Front end"},
    {InterviewStep::UserGuidance, "user_guidance", "User guidance"},
};

int step_index(InterviewStep s) { return static_cast<int>(s); }

int questions_in_step(const InterviewRecord& record, InterviewStep step) {
    return static_cast<int>(std::count_if(record.turns().begin(), record.turns().end(),
                                          [&](const InterviewTurn& t) { return t.question.step == step; }));
}

InterviewOutcome closed(InterviewStep step, const InterviewOptions& options) {
    if (step_index(step) >= step_index(final_step(options))) return InterviewComplete{};
    return StepComplete{step};
}

std::vector<std::string> question_violations(const InterviewQuestion& q) {
    std::vector<std::string> out;
    if (text::trim(q.text).empty()) out.push_back("question text is empty");
    if (text::trim(q.purpose).empty()) out.push_back("question purpose is empty");
    return out;
}

llm::ChatRequest make_request(AgentRole role, const ScenarioContext& ctx, std::string user_text,
                              const GenerationNotes& notes) {
    llm::ChatRequest request;
    request.messages.push_back({llm::Role::System, build_agent_prompt(role, ctx)});
    request.messages.push_back({llm::Role::User, append_notes(std::move(user_text), notes)});
    return request;
}

// Plain requirement lines are accepted when the reply carries no JSON at all.
llm::Parsed<std::vector<RequirementStatement>> parse_answer_lines(std::string_view content) {
    std::vector<RequirementStatement> out;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        auto end = content.find('\n', pos);
        if (end == std::string_view::npos) end = content.size();
        auto line = text::trim(content.substr(pos, end - pos));
        if (line.starts_with("- ")) line = text::trim(line.substr(2));
        if (line.starts_with("[")) {
            auto parsed = parse_requirement(line);
            if (auto* f = std::get_if<llm::ParseFailure>(&parsed)) return *f;
            out.push_back(std::get<RequirementStatement>(std::move(parsed)));
        }
        pos = end + 1;
    }
    if (out.empty()) return llm::fail("no-parseable-block", "reply holds neither JSON nor requirement lines");
    return out;
}

}  // namespace

std::string_view to_string(InterviewStep step) { return kSteps[step_index(step)].key; }

std::optional<InterviewStep> interview_step_from_string(std::string_view s) {
    const auto key = text::fold_key(s);
    for (const auto& i : kSteps) {
        if (key == text::fold_key(i.key)) return i.step;
    }
    return std::nullopt;
}

std::string_view step_title(InterviewStep step) { return kSteps[step_index(step)].title; }

std::vector<std::string> record_violations(const std::vector<InterviewTurn>& turns) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < turns.size(); ++i) {
        const auto& t = turns[i];
        const auto where = "turn " + std::to_string(i + 1) + ": ";
        if (t.id != static_cast<int>(i) + 1) out.push_back(where + "id " + std::to_string(t.id) + " out of sequence");
        if (i > 0 && step_index(t.question.step) < step_index(turns[i - 1].question.step)) {
            out.push_back(where + "step goes back from " + std::string(to_string(turns[i - 1].question.step)) +
                          " to " + std::string(to_string(t.question.step)));
        }
        for (const auto& v : question_violations(t.question)) out.push_back(where + v);
        if (t.answers.empty()) out.push_back(where + "no answers");
        for (const auto& a : t.answers) {
            for (const auto& v : statement_violations(a)) out.push_back(where + v);
        }
    }
    return out;
}

InterviewRecord InterviewRecord::from_turns(std::vector<InterviewTurn> turns) {
    if (auto v = record_violations(turns); !v.empty()) throw std::invalid_argument("invalid interview record: " + v.front());
    InterviewRecord r;
    r.turns_ = std::move(turns);
    return r;
}

int InterviewRecord::append(InterviewQuestion question, std::vector<RequirementStatement> answers) {
    InterviewTurn turn{static_cast<int>(turns_.size()) + 1, std::move(question), std::move(answers)};
    if (!turns_.empty() && step_index(turn.question.step) < step_index(turns_.back().question.step)) {
        throw std::invalid_argument("interview step cannot go back from " +
                                    std::string(to_string(turns_.back().question.step)));
    }
    if (turn.answers.empty()) throw std::invalid_argument("an interview turn needs at least one answer");
    if (auto v = question_violations(turn.question); !v.empty()) throw std::invalid_argument(v.front());
    for (const auto& a : turn.answers) {
        if (auto v = statement_violations(a); !v.empty()) throw std::invalid_argument(v.front());
    }
    turns_.push_back(std::move(turn));
    return turns_.back().id;
}

std::string render_record(const InterviewRecord& record) {
    if (record.empty()) return "(no interview turns)\n";
    std::string out;
    for (const auto& t : record.turns()) {
        out += "Turn " + std::to_string(t.id) + " [" + std::string(step_title(t.question.step)) + "]\n";
        out += "Q: " + t.question.text + "\n";
        out += "Purpose: " + t.question.purpose + "\n";
        for (const auto& a : t.answers) out += "- " + render_requirement(a) + "\n";
    }
    return out;
}

InterviewStep final_step(const InterviewOptions& options) {
    return options.user_guidance ? InterviewStep::UserGuidance : InterviewStep::FrontEnd;
}

InterviewStep current_step(const InterviewRecord& record) {
    return record.empty() ? InterviewStep::Components : record.turns().back().question.step;
}

llm::Parsed<InterviewerReply> parse_interviewer_reply(const nlohmann::json& j, InterviewStep step) {
    if (!j.is_object()) return llm::fail("schema", "expected a JSON object");
    if (!j.contains("status") || !j["status"].is_string()) return llm::fail("schema", "missing status");
    const auto status = text::fold_key(j["status"].get<std::string>());
    if (status == "stepcomplete") return InterviewerReply{};
    if (status != "question") return llm::fail("schema", "status must be \"question\" or \"step_complete\"");
    if (j.contains("step") && j["step"].is_string()) {
        const auto said = interview_step_from_string(j["step"].get<std::string>());
        if (said != step) return llm::fail("wrong-step", "question belongs to step " + j["step"].get<std::string>());
    }
    InterviewQuestion q;
    q.step = step;
    if (j.contains("question") && j["question"].is_string()) q.text = std::string(text::trim(j["question"].get<std::string>()));
    if (j.contains("purpose") && j["purpose"].is_string()) q.purpose = std::string(text::trim(j["purpose"].get<std::string>()));
    if (auto v = question_violations(q); !v.empty()) return llm::fail("schema", v.front());
    return InterviewerReply{std::move(q)};
}

llm::ChatRequest build_question_request(const InterviewRecord& record, InterviewStep step,
                                        const ScenarioContext& ctx, const InterviewOptions& options,
                                        const GenerationNotes& notes) {
    const int asked = questions_in_step(record, step);
    std::string user = request_tag("interviewer.question step=" + std::string(to_string(step)));
    user += "\nInitial prompt:\n" + ctx.initial_prompt + "\n\n";
    user += "Current step: step " + std::to_string(step_index(step) + 1) + ", " + std::string(step_title(step)) +
            ". This is question " + std::to_string(asked + 1) + " of at most " +
            std::to_string(options.question_budget) + " for this step.\n\n";
    user += "Interview record so far:\n" + render_record(record) + "\n";
    user += "Ask the next question of this step, or close the step if it is already covered.\n"
            "Reply with one fenced json block, either\n"
            "{\"status\": \"question\", \"question\": \"...\", \"purpose\": \"...\"}\n"
            "or\n"
            "{\"status\": \"step_complete\"}";
    return make_request(AgentRole::Interviewer, ctx, std::move(user), notes);
}

llm::ChatRequest build_answer_request(const InterviewQuestion& question, const ScenarioContext& ctx,
                                      const GenerationNotes& notes) {
    std::string user = request_tag("interviewee.answer step=" + std::string(to_string(question.step)));
    user += "\nInitial prompt:\n" + ctx.initial_prompt + "\n\n";
    user += "Question (" + std::string(step_title(question.step)) + "): " + question.text + "\n";
    user += "Purpose of the question: " + question.purpose + "\n\n";
    user += "Answer with one or more requirements in the templates. Reply with one fenced json block:\n"
            "{\"requirements\": [\"[overall] ...\", \"[component] ...\", \"[conditional] When ..., ...\"]}";
    return make_request(AgentRole::Interviewee, ctx, std::move(user), notes);
}

InterviewOutcome next_interview_question(const InterviewRecord& record, InterviewStep step,
                                         const ScenarioContext& ctx, const InterviewOptions& options,
                                         llm::Gateway& gateway, const GenerationNotes& notes) {
    if (step_index(step) < step_index(current_step(record))) {
        throw std::invalid_argument("interview is already past step " + std::string(to_string(step)));
    }
    if (step_index(step) > step_index(final_step(options))) return InterviewComplete{};
    if (questions_in_step(record, step) >= options.question_budget) return closed(step, options);

    const auto response = gateway.complete(build_question_request(record, step, ctx, options, notes));
    auto reply = llm::value_or_throw(llm::extract_json<InterviewerReply>(
        response, [step](const nlohmann::json& j) { return parse_interviewer_reply(j, step); }));
    if (!reply.question) return closed(step, options);
    return *reply.question;
}

InterviewOutcome next_interview_question(const InterviewRecord& record, const ScenarioContext& ctx,
                                         const InterviewOptions& options, llm::Gateway& gateway,
                                         const GenerationNotes& notes) {
    return next_interview_question(record, current_step(record), ctx, options, gateway, notes);
}

std::vector<RequirementStatement> answer_question(const InterviewQuestion& question, const ScenarioContext& ctx,
                                                  llm::Gateway& gateway, const GenerationNotes& notes) {
    const auto response = gateway.complete(build_answer_request(question, ctx, notes));
    auto parsed = llm::extract_json<std::vector<RequirementStatement>>(response, parse_requirement_batch);
    if (auto* f = std::get_if<llm::ParseFailure>(&parsed); f && f->rule == "no-parseable-block") {
        parsed = parse_answer_lines(response.content);
    }
    return llm::value_or_throw(std::move(parsed));
}

InterviewRecord conduct_interview(const ScenarioContext& ctx, const InterviewOptions& options,
                                  llm::Gateway& gateway, const GenerationNotes& notes) {
    InterviewRecord record;
    auto step = InterviewStep::Components;
    while (true) {
        auto outcome = next_interview_question(record, step, ctx, options, gateway, notes);
        if (std::holds_alternative<InterviewComplete>(outcome)) break;
        if (std::holds_alternative<StepComplete>(outcome)) {
            step = static_cast<InterviewStep>(step_index(step) + 1);
            continue;
        }
        auto question = std::get<InterviewQuestion>(std::move(outcome));
        auto answers = answer_question(question, ctx, gateway, notes);
        record.append(std::move(question), std::move(answers));
    }
    return record;
}

}  // namespace reqforge::agents
