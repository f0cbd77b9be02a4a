#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "reqforge/pipeline/types.hpp"

namespace reqforge::pipeline {

nlohmann::json provider_to_json(const llm::ProviderConfig& c);
llm::ProviderConfig provider_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const SessionConfig& c);
/// Missing keys keep their defaults. Throws std::invalid_argument for unknown enum values.
SessionConfig config_from_json(const nlohmann::json& j);

nlohmann::json record_to_json(const agents::InterviewRecord& r);
agents::InterviewRecord record_from_json(const nlohmann::json& j);
nlohmann::json srs_to_json(const agents::SrsDraft& d);
agents::SrsDraft srs_from_json(const nlohmann::json& j);

nlohmann::json payload_to_json(const ArtifactPayload& p);
ArtifactPayload payload_from_json(StageId stage, const nlohmann::json& j);

nlohmann::json artifact_to_json(const StageArtifact& a);
StageArtifact artifact_from_json(const nlohmann::json& j);

nlohmann::json decision_to_json(const GateDecision& d);
GateDecision decision_from_json(const nlohmann::json& j);

/// Whole session in one document, artifacts inline.
nlohmann::json session_to_json(const PipelineSession& s);
PipelineSession session_from_json(const nlohmann::json& j);

/// session_to_json with every timestamp zeroed, dumped with a fixed indent.
std::string canonical_session_json(const PipelineSession& s);

}  // namespace reqforge::pipeline
