#include "reqforge/pipeline/serialize.hpp"

#include <stdexcept>

namespace reqforge::pipeline {
namespace {

using nlohmann::json;

template <class T>
T enum_or_throw(std::optional<T> v, const std::string& what, const std::string& text) {
    if (!v) throw std::invalid_argument("unknown " + what + " \"" + text + "\"");
    return *v;
}

json optional_text(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

std::optional<std::string> read_optional_text(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<std::string>();
}

json timestamp(Timestamp t) { return format_timestamp(t); }
Timestamp read_timestamp(const json& j) { return parse_timestamp(j.get<std::string>()); }

StageId read_stage(const json& j) {
    const auto s = j.get<std::string>();
    return enum_or_throw(stage_from_string(s), "stage", s);
}

json requirement_to_json(const agents::RequirementStatement& r) {
    json j = {{"template", agents::to_string(r.kind)}, {"subject", r.subject}, {"statement", r.statement}};
    if (r.condition) j["condition"] = *r.condition;
    return j;
}

agents::RequirementStatement requirement_from_json(const json& j) {
    agents::RequirementStatement r;
    const auto kind = j.at("template").get<std::string>();
    r.kind = enum_or_throw(agents::requirement_template_from_string(kind), "requirement template", kind);
    r.subject = j.at("subject").get<std::string>();
    r.statement = j.at("statement").get<std::string>();
    r.condition = read_optional_text(j, "condition");
    return r;
}

json failure_to_json(const AttemptFailure& f) {
    return {{"stage", to_string(f.stage)}, {"attempt", f.attempt}, {"rule", f.rule},
            {"detail", f.detail},         {"excerpt", f.excerpt}, {"at", timestamp(f.at)}};
}

AttemptFailure failure_from_json(const json& j) {
    return {read_stage(j.at("stage")),          j.at("attempt").get<int>(),          j.at("rule").get<std::string>(),
            j.at("detail").get<std::string>(), j.at("excerpt").get<std::string>(), read_timestamp(j.at("at"))};
}

}  // namespace

json provider_to_json(const llm::ProviderConfig& c) {
    return {{"provider", c.provider},
            {"endpoint_url", c.endpoint_url},
            {"api_key_env_var", c.api_key_env_var},
            {"model", c.model},
            {"default_temperature", c.default_temperature},
            {"default_max_tokens", c.default_max_tokens},
            {"transport_timeout_s", c.transport_timeout_s},
            {"transport_retries", c.transport_retries},
            {"retry_backoff_ms", c.retry_backoff_ms}};
}

llm::ProviderConfig provider_from_json(const json& j) {
    llm::ProviderConfig c;
    c.provider = j.value("provider", c.provider);
    c.endpoint_url = j.value("endpoint_url", c.endpoint_url);
    c.api_key_env_var = j.value("api_key_env_var", c.api_key_env_var);
    c.model = j.value("model", c.model);
    c.default_temperature = j.value("default_temperature", c.default_temperature);
    c.default_max_tokens = j.value("default_max_tokens", c.default_max_tokens);
    c.transport_timeout_s = j.value("transport_timeout_s", c.transport_timeout_s);
    c.transport_retries = j.value("transport_retries", c.transport_retries);
    c.retry_backoff_ms = j.value("retry_backoff_ms", c.retry_backoff_ms);
    return c;
}

json config_to_json(const SessionConfig& c) {
    json skips = json::array();
    for (auto s : c.skip_stages) skips.push_back(to_string(s));
    return {{"provider", provider_to_json(c.provider)},
            {"prompt_kind", to_string(c.prompt_kind)},
            {"initial_prompt", c.initial_prompt},
            {"gate_policy", to_string(c.gate_policy)},
            {"skip_stages", skips},
            {"question_budget", c.question_budget},
            {"refinement_rounds", c.refinement_rounds},
            {"template_marker", optional_text(c.template_marker)},
            {"user_guidance", c.user_guidance}};
}

SessionConfig config_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("session config must be a JSON object");
    SessionConfig c;
    if (j.contains("provider")) c.provider = provider_from_json(j["provider"]);
    if (j.contains("prompt_kind")) {
        const auto k = j["prompt_kind"].get<std::string>();
        c.prompt_kind = enum_or_throw(prompt_kind_from_string(k), "prompt kind", k);
    }
    c.initial_prompt = j.value("initial_prompt", c.initial_prompt);
    if (j.contains("gate_policy")) {
        const auto p = j["gate_policy"].get<std::string>();
        c.gate_policy = enum_or_throw(gate_policy_from_string(p), "gate policy", p);
    }
    if (j.contains("skip_stages")) {
        for (const auto& s : j["skip_stages"]) c.skip_stages.insert(read_stage(s));
    }
    c.question_budget = j.value("question_budget", c.question_budget);
    c.refinement_rounds = j.value("refinement_rounds", c.refinement_rounds);
    c.template_marker = read_optional_text(j, "template_marker");
    c.user_guidance = j.value("user_guidance", c.user_guidance);
    return c;
}

json record_to_json(const agents::InterviewRecord& r) {
    json turns = json::array();
    for (const auto& t : r.turns()) {
        json answers = json::array();
        for (const auto& a : t.answers) answers.push_back(requirement_to_json(a));
        turns.push_back({{"id", t.id},
                         {"step", agents::to_string(t.question.step)},
                         {"question", t.question.text},
                         {"purpose", t.question.purpose},
                         {"answers", answers}});
    }
    return {{"turns", turns}};
}

agents::InterviewRecord record_from_json(const json& j) {
    std::vector<agents::InterviewTurn> turns;
    for (const auto& t : j.at("turns")) {
        agents::InterviewTurn turn;
        turn.id = t.at("id").get<int>();
        const auto step = t.at("step").get<std::string>();
        turn.question.step = enum_or_throw(agents::interview_step_from_string(step), "interview step", step);
        turn.question.text = t.at("question").get<std::string>();
        turn.question.purpose = t.at("purpose").get<std::string>();
        for (const auto& a : t.at("answers")) turn.answers.push_back(requirement_from_json(a));
        turns.push_back(std::move(turn));
    }
    return agents::InterviewRecord::from_turns(std::move(turns));
}

json srs_to_json(const agents::SrsDraft& d) {
    json sections = json::array();
    for (const auto& s : d.sections) {
        sections.push_back({{"heading", s.heading}, {"body", s.body}, {"source_turns", s.source_turn_ids}});
    }
    return {{"sections", sections}};
}

agents::SrsDraft srs_from_json(const json& j) {
    auto parsed = agents::parse_srs_sections(j);
    if (auto* f = std::get_if<llm::ParseFailure>(&parsed)) throw std::invalid_argument("srs: " + f->detail);
    return std::get<agents::SrsDraft>(std::move(parsed));
}

json payload_to_json(const ArtifactPayload& p) {
    struct Visitor {
        json operator()(const agents::InterviewRecord& r) const { return record_to_json(r); }
        json operator()(const agents::SrsDraft& d) const { return srs_to_json(d); }
        json operator()(const cot::ChainOfThought& c) const { return cot::chain_to_json(c); }
        json operator()(const ValidatedChain& v) const {
            return {{"cot", cot::chain_to_json(v.cot)}, {"critique", cot::critique_to_json(v.critique)}};
        }
    };
    return std::visit(Visitor{}, p);
}

ArtifactPayload payload_from_json(StageId stage, const json& j) {
    switch (stage) {
        case StageId::Elicitation: return record_from_json(j);
        case StageId::Analysis: return srs_from_json(j);
        case StageId::Specification: return cot::chain_from_json(j);
        case StageId::Validation:
            return ValidatedChain{cot::chain_from_json(j.at("cot")), cot::critique_from_json(j.at("critique"))};
    }
    throw std::invalid_argument("unknown stage");
}

json artifact_to_json(const StageArtifact& a) {
    return {{"stage", to_string(a.stage)},
            {"attempt", a.attempt},
            {"created_at", timestamp(a.created_at)},
            {"payload", payload_to_json(a.payload)}};
}

StageArtifact artifact_from_json(const json& j) {
    StageArtifact a;
    a.stage = read_stage(j.at("stage"));
    a.attempt = j.at("attempt").get<int>();
    a.created_at = read_timestamp(j.at("created_at"));
    a.payload = payload_from_json(a.stage, j.at("payload"));
    return a;
}

json decision_to_json(const GateDecision& d) {
    return {{"verdict", to_string(d.verdict)}, {"feedback", optional_text(d.feedback)}, {"decided_at", timestamp(d.decided_at)}};
}

GateDecision decision_from_json(const json& j) {
    GateDecision d;
    const auto v = j.at("verdict").get<std::string>();
    d.verdict = enum_or_throw(verdict_from_string(v), "verdict", v);
    d.feedback = read_optional_text(j, "feedback");
    if (j.contains("decided_at")) d.decided_at = read_timestamp(j["decided_at"]);
    return d;
}

json session_to_json(const PipelineSession& s) {
    json history = json::array();
    for (const auto& e : s.history) {
        history.push_back({{"artifact", artifact_to_json(e.artifact)},
                           {"decision", e.decision ? decision_to_json(*e.decision) : json(nullptr)}});
    }
    json failures = json::array();
    for (const auto& f : s.failures) failures.push_back(failure_to_json(f));
    json feedback = json::object();
    for (const auto& [stage, notes] : s.stage_feedback) feedback[std::string(to_string(stage))] = notes;
    return {{"id", s.id},
            {"config", config_to_json(s.config)},
            {"created_at", timestamp(s.created_at)},
            {"updated_at", timestamp(s.updated_at)},
            {"status", to_string(s.status)},
            {"current_stage", to_string(s.current_stage)},
            {"history", history},
            {"failures", failures},
            {"stage_feedback", feedback},
            {"optimization_input", s.optimization_input},
            {"stored_template", optional_text(s.stored_template)},
            {"final_prompt", optional_text(s.final_prompt)},
            {"failure_reason", optional_text(s.failure_reason)},
            {"metadata", s.metadata}};
}

PipelineSession session_from_json(const json& j) {
    PipelineSession s;
    s.id = j.at("id").get<std::string>();
    s.config = config_from_json(j.at("config"));
    s.created_at = read_timestamp(j.at("created_at"));
    s.updated_at = read_timestamp(j.at("updated_at"));
    const auto status = j.at("status").get<std::string>();
    s.status = enum_or_throw(session_status_from_string(status), "status", status);
    s.current_stage = read_stage(j.at("current_stage"));
    for (const auto& e : j.at("history")) {
        HistoryEntry entry{artifact_from_json(e.at("artifact")), std::nullopt};
        if (e.contains("decision") && !e["decision"].is_null()) entry.decision = decision_from_json(e["decision"]);
        s.history.push_back(std::move(entry));
    }
    for (const auto& f : j.at("failures")) s.failures.push_back(failure_from_json(f));
    for (const auto& [stage, notes] : j.at("stage_feedback").items()) {
        s.stage_feedback[enum_or_throw(stage_from_string(stage), "stage", stage)] = notes.get<std::vector<std::string>>();
    }
    s.optimization_input = j.at("optimization_input").get<std::string>();
    s.stored_template = read_optional_text(j, "stored_template");
    s.final_prompt = read_optional_text(j, "final_prompt");
    s.failure_reason = read_optional_text(j, "failure_reason");
    s.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    return s;
}

std::string canonical_session_json(const PipelineSession& session) {
    auto s = session;
    s.created_at = s.updated_at = Timestamp{};
    for (auto& e : s.history) {
        e.artifact.created_at = Timestamp{};
        if (e.decision) e.decision->decided_at = Timestamp{};
    }
    for (auto& f : s.failures) f.at = Timestamp{};
    return session_to_json(s).dump(2);
}

}  // namespace reqforge::pipeline
