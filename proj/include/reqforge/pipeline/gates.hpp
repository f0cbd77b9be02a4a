#pragma once

#include <iosfwd>
#include <stdexcept>

#include "reqforge/pipeline/types.hpp"

namespace reqforge::pipeline {

class GateProvider {
public:
    virtual ~GateProvider() = default;
    virtual GateDecision decide(const PipelineSession& session, const StageArtifact& artifact) = 0;
};

class AutoApproveGate : public GateProvider {
public:
    GateDecision decide(const PipelineSession&, const StageArtifact&) override { return GateDecision::approve(); }
};

class GateInputClosed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shows the artifact on `out` and reads "approve" or "reject: <feedback>" lines from `in`.
/// Unrecognised lines are asked again; end of input throws GateInputClosed.
class StreamGate : public GateProvider {
public:
    StreamGate(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
    GateDecision decide(const PipelineSession& session, const StageArtifact& artifact) override;

private:
    std::istream& in_;
    std::ostream& out_;
};

/// Parses one reviewer line as StreamGate does. nullopt for anything else.
std::optional<GateDecision> parse_gate_line(std::string_view line);

}  // namespace reqforge::pipeline
