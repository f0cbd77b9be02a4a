#pragma once

#include <functional>
#include <memory>

#include "reqforge/pipeline/types.hpp"

namespace reqforge::llm {
class Gateway;
}

namespace reqforge::pipeline {

enum class EventKind { StageStarted, AttemptFailed, AwaitingGate, GateSubmitted, Completed, Failed };

std::string_view to_string(EventKind k);

struct SessionEvent {
    EventKind kind = EventKind::StageStarted;
    StageId stage = StageId::Elicitation;
    int attempt = 0;
    std::string detail;
};

/// Called after every state change, with the session already updated. Used for persistence.
using EventSink = std::function<void(const PipelineSession&, const SessionEvent&)>;

class GateProvider;

/// Applies template separation when a marker is configured for a system prompt.
/// Throws ConfigError listing every violation.
PipelineSession start_session(const SessionConfig& config, std::string id = {}, const Clock& clock = now_ms);

/// Fresh identifier: UTC timestamp plus random suffix.
std::string new_session_id(const Clock& clock = now_ms);

agents::ScenarioContext session_context(const PipelineSession& session);

/// Drives stages of one session. Not thread-safe: callers serialize access per session.
class Engine {
public:
    explicit Engine(std::shared_ptr<llm::Gateway> gateway, Clock clock = now_ms, EventSink sink = {});

    /// Runs the current stage, regenerating unusable replies up to three times. On success the
    /// session awaits its gate, or is approved at once under AutoApprove. Throws StageFailure
    /// after the status has been set to Failed.
    StageArtifact run_stage(PipelineSession& session);

    /// Throws SessionStateError when no gate is pending and std::invalid_argument for a
    /// rejection without feedback; the session is unchanged then.
    void submit_gate(PipelineSession& session, GateDecision decision);

    /// Loops run_stage and gates until Completed. Failures propagate as StageFailure.
    void run_to_completion(PipelineSession& session, GateProvider& gates);

    llm::Gateway& gateway() noexcept { return *gateway_; }

private:
    ArtifactPayload execute(const PipelineSession& session, StageId stage, const GenerationNotes& notes);
    void emit(const PipelineSession& session, EventKind kind, StageId stage, int attempt = 0, std::string detail = {});

    std::shared_ptr<llm::Gateway> gateway_;
    Clock clock_;
    EventSink sink_;
};

/// Stage inputs as the next stage will see them, including the skip bypasses.
agents::InterviewRecord effective_record(const PipelineSession& session);
agents::SrsDraft effective_srs(const PipelineSession& session);
cot::ChainOfThought effective_chain(const PipelineSession& session);

/// The artifact of the last approved run of `stage`, if any.
const StageArtifact* approved_artifact(const PipelineSession& session, StageId stage);

/// Final prompt for a session whose stages are all approved, with any stored template re-attached.
std::string render_final_prompt(const PipelineSession& session);

}  // namespace reqforge::pipeline
