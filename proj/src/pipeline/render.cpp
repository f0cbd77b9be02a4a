#include "reqforge/pipeline/render.hpp"

#include "reqforge/cot/system_prompt.hpp"
#include "reqforge/common/text.hpp"

namespace reqforge::pipeline {
namespace {

std::string render_chain(const cot::ChainOfThought& chain) {
    if (const auto* list = chain.task_list()) {
        std::string out;
        for (std::size_t i = 0; i < list->tasks.size(); ++i) {
            const auto& t = list->tasks[i];
            out += std::to_string(i + 1) + ". " + t.id + " [" + std::string(cot::to_string(t.category)) + "] " + t.title;
            if (!t.depends_on.empty()) out += " (after " + text::join(t.depends_on, ", ") + ")";
            out += "\n   " + t.description + "\n";
        }
        return out;
    }
    return cot::assemble_system_prompt(*chain.system_prompt()) + "\n";
}

std::string render_critique(const cot::CritiqueReport& r) {
    std::string out = "Critique\n";
    for (const auto& [aspect, note] : r.aspect_notes) out += "  " + std::string(cot::aspect_title(aspect)) + ": " + note + "\n";
    out += "  Strengths: " + r.summary_strengths + "\n  Weaknesses: " + r.summary_weaknesses + "\n  Scores:";
    for (const auto& [part, score] : r.part_scores) out += " " + part + "=" + std::to_string(score);
    out += "\n  Feedback: " + r.feedback + "\n";
    return out;
}

}  // namespace

std::string render_artifact(const StageArtifact& artifact) {
    struct Visitor {
        std::string operator()(const agents::InterviewRecord& r) const { return agents::render_record(r); }
        std::string operator()(const agents::SrsDraft& d) const { return agents::render_srs(d); }
        std::string operator()(const cot::ChainOfThought& c) const { return render_chain(c); }
        std::string operator()(const ValidatedChain& v) const { return render_chain(v.cot) + "\n" + render_critique(v.critique); }
    };
    return std::visit(Visitor{}, artifact.payload);
}

}  // namespace reqforge::pipeline
