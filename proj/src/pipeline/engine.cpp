#include "reqforge/pipeline/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include "reqforge/agents/critic.hpp"
#include "reqforge/common/text.hpp"
#include "reqforge/cot/generate.hpp"
#include "reqforge/cot/template.hpp"
#include "reqforge/llm/gateway.hpp"
#include "reqforge/pipeline/gates.hpp"

namespace reqforge::pipeline {

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::StageStarted: return "stage_started";
        case EventKind::AttemptFailed: return "attempt_failed";
        case EventKind::AwaitingGate: return "awaiting_gate";
        case EventKind::GateSubmitted: return "gate_submitted";
        case EventKind::Completed: return "completed";
        case EventKind::Failed: return "failed";
    }
    return "?";
}

std::string new_session_id(const Clock& clock) {
    const auto stamp = format_timestamp(clock());  // 2026-10-14T08:30:00.125Z
    std::string digits;
    for (char c : stamp.substr(0, 19)) {
        if (c >= '0' && c <= '9') digits += c;
    }
    std::random_device rd;
    char suffix[8];
    std::snprintf(suffix, sizeof suffix, "%06x", static_cast<unsigned>(rd()) & 0xffffffu);
    return digits.substr(0, 8) + "-" + digits.substr(8) + "-" + suffix;
}

PipelineSession start_session(const SessionConfig& config, std::string id, const Clock& clock) {
    auto violations = config_violations(config);
    PipelineSession s;
    s.config = config;
    s.optimization_input = config.initial_prompt;
    if (config.template_marker && config.prompt_kind == PromptKind::SystemPrompt) {
        auto split = cot::split_template(config.initial_prompt, *config.template_marker);
        s.optimization_input = std::move(split.body);
        s.stored_template = std::move(split.template_text);
        if (text::trim(s.optimization_input).empty()) violations.push_back("prompt is empty once the template is removed");
    }
    if (!violations.empty()) throw ConfigError(std::move(violations));
    s.id = id.empty() ? new_session_id(clock) : std::move(id);
    s.created_at = s.updated_at = clock();
    s.status = SessionStatus::Running;
    s.current_stage = active_stages(config).front();
    return s;
}

agents::ScenarioContext session_context(const PipelineSession& session) {
    return agents::default_context(session.config.prompt_kind, session.optimization_input);
}

const StageArtifact* approved_artifact(const PipelineSession& session, StageId stage) {
    for (auto it = session.history.rbegin(); it != session.history.rend(); ++it) {
        if (it->artifact.stage == stage && it->decision && it->decision->verdict == GateVerdict::Approve) {
            return &it->artifact;
        }
    }
    return nullptr;
}

agents::InterviewRecord effective_record(const PipelineSession& session) {
    if (const auto* a = approved_artifact(session, StageId::Elicitation)) {
        return std::get<agents::InterviewRecord>(a->payload);
    }
    return {};
}

agents::SrsDraft effective_srs(const PipelineSession& session) {
    if (const auto* a = approved_artifact(session, StageId::Analysis)) return std::get<agents::SrsDraft>(a->payload);
    return agents::wrap_record_as_srs(effective_record(session), session_context(session));
}

cot::ChainOfThought effective_chain(const PipelineSession& session) {
    if (const auto* a = approved_artifact(session, StageId::Validation)) return std::get<ValidatedChain>(a->payload).cot;
    if (const auto* a = approved_artifact(session, StageId::Specification)) {
        return std::get<cot::ChainOfThought>(a->payload);
    }
    return cot::chain_from_srs(effective_srs(session), session_context(session));
}

std::string render_final_prompt(const PipelineSession& session) {
    auto chain = effective_chain(session);
    if (const auto* list = chain.task_list()) return cot::render_user_prompt(session.optimization_input, *list);
    auto draft = *chain.system_prompt();
    draft.attached_template = session.stored_template;
    return cot::assemble_system_prompt(draft);
}

Engine::Engine(std::shared_ptr<llm::Gateway> gateway, Clock clock, EventSink sink)
    : gateway_(std::move(gateway)), clock_(std::move(clock)), sink_(std::move(sink)) {}

void Engine::emit(const PipelineSession& session, EventKind kind, StageId stage, int attempt, std::string detail) {
    if (sink_) sink_(session, SessionEvent{kind, stage, attempt, std::move(detail)});
}

ArtifactPayload Engine::execute(const PipelineSession& session, StageId stage, const GenerationNotes& notes) {
    const auto ctx = session_context(session);
    const auto& cfg = session.config;
    switch (stage) {
        case StageId::Elicitation: {
            agents::InterviewOptions options{cfg.question_budget, cfg.user_guidance};
            return agents::conduct_interview(ctx, options, *gateway_, notes);
        }
        case StageId::Analysis: {
            const auto record = effective_record(session);
            if (record.empty()) {
                // Nothing to trace back to: only the section structure is checked.
                const auto response = gateway_->complete(agents::build_srs_request(record, ctx, notes));
                return llm::value_or_throw(llm::extract_json<agents::SrsDraft>(response, agents::parse_srs_sections));
            }
            return agents::draft_srs(record, ctx, *gateway_, notes);
        }
        case StageId::Specification:
            return cot::generate_cot(effective_srs(session), ctx, std::nullopt, *gateway_, notes);
        case StageId::Validation: {
            const auto srs = effective_srs(session);
            auto chain = effective_chain(session);
            auto report = agents::critique(chain, srs, ctx, *gateway_, notes);
            for (int round = 0; round < cfg.refinement_rounds; ++round) {
                chain = cot::generate_cot(srs, ctx, report, *gateway_, notes);
                report = agents::critique(chain, srs, ctx, *gateway_, notes);
            }
            return ValidatedChain{std::move(chain), std::move(report)};
        }
    }
    throw std::logic_error("unknown stage");
}

StageArtifact Engine::run_stage(PipelineSession& session) {
    if (session.status != SessionStatus::Running) {
        throw SessionStateError("run_stage needs a running session, status is " + std::string(to_string(session.status)));
    }
    const auto stage = session.current_stage;
    session.updated_at = clock_();
    emit(session, EventKind::StageStarted, stage);

    GenerationNotes notes;
    if (auto it = session.stage_feedback.find(stage); it != session.stage_feedback.end()) {
        notes.reviewer_feedback = it->second;
    }
    const auto fail_stage = [&](std::string reason) -> StageFailure {
        session.status = SessionStatus::Failed;
        session.failure_reason = reason;
        session.updated_at = clock_();
        emit(session, EventKind::Failed, stage, 0, reason);
        return StageFailure(stage, reason);
    };

    for (int attempt = 1; attempt <= kMaxStageAttempts; ++attempt) {
        try {
            auto payload = execute(session, stage, notes);
            StageArtifact artifact{stage, std::move(payload), attempt, clock_()};
            session.history.push_back({artifact, std::nullopt});
            session.status = SessionStatus::AwaitingGate;
            session.updated_at = artifact.created_at;
            emit(session, EventKind::AwaitingGate, stage, attempt);
            if (session.config.gate_policy == GatePolicy::AutoApprove) submit_gate(session, GateDecision::approve());
            return artifact;
        } catch (const llm::ParseError& e) {
            const auto& f = e.failure();
            session.failures.push_back({stage, attempt, f.rule, f.detail, f.excerpt, clock_()});
            session.updated_at = session.failures.back().at;
            notes.retry_note = f.rule + (f.detail.empty() ? "" : ": " + f.detail);
            emit(session, EventKind::AttemptFailed, stage, attempt, *notes.retry_note);
        } catch (const llm::GatewayError& e) {
            throw fail_stage(std::string(to_string(stage)) + " failed: " + e.what());
        } catch (const std::invalid_argument& e) {
            throw fail_stage(std::string(to_string(stage)) + " failed: " + e.what());
        }
    }
    const auto& last = session.failures.back();
    throw fail_stage(std::string(to_string(stage)) + " failed after " + std::to_string(kMaxStageAttempts) +
                     " attempts; last problem: " + last.rule + (last.detail.empty() ? "" : ": " + last.detail));
}

void Engine::submit_gate(PipelineSession& session, GateDecision decision) {
    if (session.status != SessionStatus::AwaitingGate || session.history.empty() || session.history.back().decision) {
        throw SessionStateError("no gate is pending, status is " + std::string(to_string(session.status)));
    }
    if (auto v = decision_violations(decision); !v.empty()) throw std::invalid_argument(v.front());
    const auto stage = session.current_stage;
    decision.decided_at = clock_();
    if (decision.verdict == GateVerdict::Approve) decision.feedback.reset();
    session.history.back().decision = decision;
    session.updated_at = decision.decided_at;

    if (decision.verdict == GateVerdict::Reject) {
        session.stage_feedback[stage].push_back(*decision.feedback);
        session.status = SessionStatus::Running;
        emit(session, EventKind::GateSubmitted, stage, 0, "reject");
        return;
    }
    const auto active = active_stages(session.config);
    const auto it = std::find(active.begin(), active.end(), stage);
    if (it + 1 == active.end()) {
        session.final_prompt = render_final_prompt(session);
        session.metadata["final_prompt_format"] = session.config.prompt_kind == PromptKind::UserPrompt
                                                      ? "preamble+json_task_list"
                                                      : "five_section_system_prompt";
        session.status = SessionStatus::Completed;
        emit(session, EventKind::GateSubmitted, stage, 0, "approve");
        emit(session, EventKind::Completed, stage);
        return;
    }
    session.current_stage = *(it + 1);
    session.status = SessionStatus::Running;
    emit(session, EventKind::GateSubmitted, stage, 0, "approve");
}

void Engine::run_to_completion(PipelineSession& session, GateProvider& gates) {
    while (session.status == SessionStatus::Running || session.status == SessionStatus::AwaitingGate) {
        if (session.status == SessionStatus::AwaitingGate) {
            submit_gate(session, gates.decide(session, session.history.back().artifact));
            continue;
        }
        run_stage(session);
    }
}

}  // namespace reqforge::pipeline
