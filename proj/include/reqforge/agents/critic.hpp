#pragma once

#include "reqforge/agents/srs.hpp"
#include "reqforge/cot/chain.hpp"
#include "reqforge/cot/critique.hpp"

namespace reqforge::agents {

llm::ChatRequest build_critique_request(const cot::ChainOfThought& cot, const SrsDraft& srs,
                                        const ScenarioContext& ctx, const GenerationNotes& notes);

/// Critic review: notes on all eight aspects, a strengths/weaknesses summary, one score per
/// part of `cot` and feedback. Missing pieces are parse failures.
cot::CritiqueReport critique(const cot::ChainOfThought& cot, const SrsDraft& srs, const ScenarioContext& ctx,
                             llm::Gateway& gateway, const GenerationNotes& notes = {});

}  // namespace reqforge::agents
