#pragma once

#include <random>
#include <string>
#include <vector>

#include "reqforge/pipeline/gates.hpp"
#include "reqforge/pipeline/types.hpp"

namespace reqforge::testing {

using pipeline::GateDecision;
using pipeline::GateProvider;
using pipeline::GateVerdict;
using pipeline::PipelineSession;
using pipeline::StageArtifact;

/// Independent stage-order check: an artifact for stage S must be preceded by an approved
/// artifact of every earlier active stage.
inline std::vector<std::string> order_safety_problems(const PipelineSession& s) {
    std::vector<std::string> out;
    const auto active = pipeline::active_stages(s.config);
    for (std::size_t i = 0; i < s.history.size(); ++i) {
        const auto stage = s.history[i].artifact.stage;
        for (auto earlier : active) {
            if (earlier >= stage) break;
            bool approved = false;
            for (std::size_t k = 0; k < i; ++k) {
                const auto& h = s.history[k];
                approved |= h.artifact.stage == earlier && h.decision && h.decision->verdict == GateVerdict::Approve;
            }
            if (!approved) out.push_back("artifact " + std::to_string(i + 1) + " precedes approval of " + std::string(pipeline::to_string(earlier)));
        }
        const int a = s.history[i].artifact.attempt;
        if (a < 1 || a > 3) out.push_back("attempt out of range");
    }
    for (std::size_t k = 0; k + 1 < s.history.size(); ++k) {
        if (!s.history[k].decision) out.push_back("pending gate before the last entry");
    }
    return out;
}

/// Gate that rejects at a seeded rate, at most `max_rejects` times.
class RandomGate : public GateProvider {
public:
    RandomGate(unsigned seed, double rate, int max_rejects) : rng_(seed), rate_(rate), left_(max_rejects) {}
    GateDecision decide(const PipelineSession&, const StageArtifact&) override {
        if (left_ > 0 && std::uniform_real_distribution<>(0, 1)(rng_) < rate_) {
            --left_;
            ++rejects;
            return GateDecision::reject("please revise #" + std::to_string(rejects));
        }
        return GateDecision::approve();
    }
    int rejects = 0;

private:
    std::mt19937 rng_;
    double rate_;
    int left_;
};

}  // namespace reqforge::testing
