#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "reqforge/agents/interview.hpp"
#include "reqforge/agents/srs.hpp"
#include "reqforge/common/prompt_kind.hpp"
#include "reqforge/common/time.hpp"
#include "reqforge/cot/chain.hpp"
#include "reqforge/cot/critique.hpp"
#include "reqforge/llm/chat.hpp"

namespace reqforge::pipeline {

enum class StageId { Elicitation, Analysis, Specification, Validation };

inline constexpr std::array<StageId, 4> kAllStages = {StageId::Elicitation, StageId::Analysis, StageId::Specification,
                                                     StageId::Validation};

std::string_view to_string(StageId stage);  // "elicitation", ...
std::optional<StageId> stage_from_string(std::string_view s);

enum class GateVerdict { Approve, Reject };

std::string_view to_string(GateVerdict v);
std::optional<GateVerdict> verdict_from_string(std::string_view s);

struct GateDecision {
    GateVerdict verdict = GateVerdict::Approve;
    std::optional<std::string> feedback;
    Timestamp decided_at{};

    static GateDecision approve() { return {GateVerdict::Approve, std::nullopt, {}}; }
    static GateDecision reject(std::string feedback) { return {GateVerdict::Reject, std::move(feedback), {}}; }

    bool operator==(const GateDecision&) const = default;
};

std::vector<std::string> decision_violations(const GateDecision& d);

enum class GatePolicy { Interactive, AutoApprove, Serve };

std::string_view to_string(GatePolicy p);
std::optional<GatePolicy> gate_policy_from_string(std::string_view s);

inline constexpr int kMaxStageAttempts = 3;

struct SessionConfig {
    llm::ProviderConfig provider;
    PromptKind prompt_kind = PromptKind::UserPrompt;
    std::string initial_prompt;
    GatePolicy gate_policy = GatePolicy::AutoApprove;
    std::set<StageId> skip_stages;
    int question_budget = 3;    // 1..10
    int refinement_rounds = 1;  // 0..3
    std::optional<std::string> template_marker;
    bool user_guidance = false;

    bool operator==(const SessionConfig&) const = default;
};

std::vector<std::string> config_violations(const SessionConfig& config);

/// Validation output: the last chain of the refinement loop and the critique of it.
struct ValidatedChain {
    cot::ChainOfThought cot;
    cot::CritiqueReport critique;

    bool operator==(const ValidatedChain&) const = default;
};

using ArtifactPayload = std::variant<agents::InterviewRecord, agents::SrsDraft, cot::ChainOfThought, ValidatedChain>;

struct StageArtifact {
    StageId stage = StageId::Elicitation;
    ArtifactPayload payload;
    int attempt = 1;
    Timestamp created_at{};

    bool operator==(const StageArtifact&) const = default;
};

/// The payload alternative a stage produces.
bool payload_matches(StageId stage, const ArtifactPayload& payload);

struct HistoryEntry {
    StageArtifact artifact;
    std::optional<GateDecision> decision;  // nullopt while the gate is pending

    bool operator==(const HistoryEntry&) const = default;
};

/// One rejected reply inside a stage run.
struct AttemptFailure {
    StageId stage = StageId::Elicitation;
    int attempt = 1;
    std::string rule;
    std::string detail;
    std::string excerpt;
    Timestamp at{};

    bool operator==(const AttemptFailure&) const = default;
};

enum class SessionStatus { Running, AwaitingGate, Failed, Completed };

std::string_view to_string(SessionStatus s);
std::optional<SessionStatus> session_status_from_string(std::string_view s);

struct PipelineSession {
    std::string id;
    SessionConfig config;
    Timestamp created_at{};
    Timestamp updated_at{};
    SessionStatus status = SessionStatus::Running;
    StageId current_stage = StageId::Elicitation;
    std::vector<HistoryEntry> history;
    std::vector<AttemptFailure> failures;
    std::map<StageId, std::vector<std::string>> stage_feedback;  // rejection feedback per stage, oldest first
    std::string optimization_input;                              // initial prompt minus any template
    std::optional<std::string> stored_template;
    std::optional<std::string> final_prompt;
    std::optional<std::string> failure_reason;
    std::map<std::string, std::string> metadata;

    bool operator==(const PipelineSession&) const = default;
};

/// Structural invariants of a session: gate placement, stage order, attempt bounds and
/// the final_prompt/status pairing. Used by tests and when loading from disk.
std::vector<std::string> session_violations(const PipelineSession& session);

std::vector<StageId> active_stages(const SessionConfig& config);

class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

class SessionStateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class StageFailure : public std::runtime_error {
public:
    StageFailure(StageId stage, const std::string& message) : std::runtime_error(message), stage_(stage) {}
    StageId stage() const noexcept { return stage_; }

private:
    StageId stage_;
};

}  // namespace reqforge::pipeline
