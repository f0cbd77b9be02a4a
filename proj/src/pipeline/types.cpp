#include "reqforge/pipeline/types.hpp"

#include <algorithm>

#include "reqforge/common/text.hpp"

namespace reqforge::pipeline {
namespace {

constexpr std::string_view kStageNames[] = {"elicitation", "analysis", "specification", "validation"};
constexpr std::string_view kStatusNames[] = {"running", "awaiting_gate", "failed", "completed"};
constexpr std::string_view kPolicyNames[] = {"interactive", "auto", "serve"};

template <class E, std::size_t N>
std::optional<E> lookup(const std::string_view (&names)[N], std::string_view s) {
    const auto key = text::fold_key(s);
    for (std::size_t i = 0; i < N; ++i) {
        if (key == text::fold_key(names[i])) return static_cast<E>(i);
    }
    return std::nullopt;
}

std::string join_message(const std::vector<std::string>& v) {
    return "invalid session config: " + text::join(v, "; ");
}

}  // namespace

std::string_view to_string(StageId stage) { return kStageNames[static_cast<int>(stage)]; }
std::optional<StageId> stage_from_string(std::string_view s) { return lookup<StageId>(kStageNames, s); }

std::string_view to_string(GateVerdict v) { return v == GateVerdict::Approve ? "approve" : "reject"; }

std::optional<GateVerdict> verdict_from_string(std::string_view s) {
    const auto key = text::fold_key(s);
    if (key == "approve") return GateVerdict::Approve;
    if (key == "reject") return GateVerdict::Reject;
    return std::nullopt;
}

std::vector<std::string> decision_violations(const GateDecision& d) {
    if (d.verdict == GateVerdict::Reject && (!d.feedback || text::trim(*d.feedback).empty())) {
        return {"a rejection needs non-empty feedback"};
    }
    return {};
}

std::string_view to_string(GatePolicy p) { return kPolicyNames[static_cast<int>(p)]; }

std::optional<GatePolicy> gate_policy_from_string(std::string_view s) {
    if (text::fold_key(s) == "autoapprove") return GatePolicy::AutoApprove;
    return lookup<GatePolicy>(kPolicyNames, s);
}

std::string_view to_string(SessionStatus s) { return kStatusNames[static_cast<int>(s)]; }
std::optional<SessionStatus> session_status_from_string(std::string_view s) {
    return lookup<SessionStatus>(kStatusNames, s);
}

std::vector<std::string> config_violations(const SessionConfig& c) {
    auto out = llm::config_violations(c.provider);
    if (text::trim(c.initial_prompt).empty()) out.push_back("initial_prompt is empty");
    if (c.question_budget < 1 || c.question_budget > 10) out.push_back("question_budget must be within 1..10");
    if (c.refinement_rounds < 0 || c.refinement_rounds > 3) out.push_back("refinement_rounds must be within 0..3");
    if (c.skip_stages.size() >= kAllStages.size()) out.push_back("at least one stage must run");
    if (c.template_marker && c.template_marker->empty()) out.push_back("template_marker is empty");
    return out;
}

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::invalid_argument(join_message(violations)), violations_(std::move(violations)) {}

std::vector<StageId> active_stages(const SessionConfig& config) {
    std::vector<StageId> out;
    for (auto s : kAllStages) {
        if (!config.skip_stages.count(s)) out.push_back(s);
    }
    return out;
}

bool payload_matches(StageId stage, const ArtifactPayload& payload) {
    return static_cast<std::size_t>(stage) == payload.index();
}

std::vector<std::string> session_violations(const PipelineSession& s) {
    std::vector<std::string> out;
    const auto active = active_stages(s.config);
    std::vector<StageId> approved;
    for (std::size_t i = 0; i < s.history.size(); ++i) {
        const auto& e = s.history[i];
        const auto where = "history[" + std::to_string(i + 1) + "]: ";
        const auto stage = e.artifact.stage;
        if (!e.decision && i + 1 != s.history.size()) out.push_back(where + "pending gate is not last");
        if (e.decision) {
            for (const auto& v : decision_violations(*e.decision)) out.push_back(where + v);
        }
        if (e.artifact.attempt < 1 || e.artifact.attempt > kMaxStageAttempts) out.push_back(where + "attempt out of 1..3");
        if (!payload_matches(stage, e.artifact.payload)) out.push_back(where + "payload does not match stage");
        if (s.config.skip_stages.count(stage)) out.push_back(where + "artifact for a skipped stage");
        // Every earlier active stage must already be approved, and this one not yet.
        const auto pos = std::find(active.begin(), active.end(), stage) - active.begin();
        if (static_cast<std::size_t>(pos) != approved.size()) {
            out.push_back(where + std::string(to_string(stage)) + " ran out of order");
        }
        if (e.decision && e.decision->verdict == GateVerdict::Approve) approved.push_back(stage);
    }
    for (std::size_t i = 0; i < approved.size(); ++i) {
        if (i >= active.size() || approved[i] != active[i]) {
            out.push_back("approved stages are not a prefix of the stage order");
            break;
        }
    }
    const bool pending = !s.history.empty() && !s.history.back().decision;
    if (pending != (s.status == SessionStatus::AwaitingGate)) out.push_back("pending gate does not match status");
    if (s.final_prompt.has_value() != (s.status == SessionStatus::Completed)) {
        out.push_back("final_prompt must be present exactly when completed");
    }
    if (s.status == SessionStatus::Completed && approved.size() != active.size()) {
        out.push_back("completed without approving every active stage");
    }
    return out;
}

}  // namespace reqforge::pipeline
