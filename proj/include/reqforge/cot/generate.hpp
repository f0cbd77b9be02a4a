#pragma once

#include <optional>
#include <string>

#include "reqforge/agents/srs.hpp"
#include "reqforge/cot/chain.hpp"
#include "reqforge/cot/critique.hpp"

namespace reqforge::cot {

/// Block appended to the CoTer request when revising after a Critic review.
std::string critique_feedback_block(const CritiqueReport& report);

llm::ChatRequest build_cot_request(const agents::SrsDraft& srs, const agents::ScenarioContext& ctx,
                                   const std::optional<CritiqueReport>& prior_feedback,
                                   const GenerationNotes& notes);

/// CoTer generation. Task lists are re-ordered with order_tasks; drafts must pass the
/// completeness check. Throws llm::ParseError when the reply is unusable.
ChainOfThought generate_cot(const agents::SrsDraft& srs, const agents::ScenarioContext& ctx,
                            const std::optional<CritiqueReport>& prior_feedback, llm::Gateway& gateway,
                            const GenerationNotes& notes = {});

/// Stand-in used when the Specification stage is skipped: the SRS text becomes the chain body.
ChainOfThought chain_from_srs(const agents::SrsDraft& srs, const agents::ScenarioContext& ctx);

}  // namespace reqforge::cot
