#include "reqforge/pipeline/gates.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "reqforge/common/text.hpp"
#include "reqforge/pipeline/render.hpp"

namespace reqforge::pipeline {

std::optional<GateDecision> parse_gate_line(std::string_view line) {
    const auto t = text::trim(line);
    const auto word_end = t.find_first_of(": \t");
    const auto word = text::lower(t.substr(0, word_end));
    auto rest = word_end == std::string_view::npos ? std::string_view{} : t.substr(word_end);
    if (!rest.empty() && rest.front() == ':') rest.remove_prefix(1);
    rest = text::trim(rest);
    if (word == "approve" || word == "a" || word == "yes" || word == "y") return GateDecision::approve();
    if ((word == "reject" || word == "r") && !rest.empty()) return GateDecision::reject(std::string(rest));
    return std::nullopt;
}

GateDecision StreamGate::decide(const PipelineSession& session, const StageArtifact& artifact) {
    out_ << "\n=== " << to_string(artifact.stage) << " (attempt " << artifact.attempt << ") of session " << session.id
         << " ===\n"
         << render_artifact(artifact) << "\n";
    while (true) {
        out_ << "Gate: type \"approve\" or \"reject: <feedback>\"\n> " << std::flush;
        std::string line;
        if (!std::getline(in_, line)) throw GateInputClosed("input closed while waiting for a gate decision");
        if (text::trim(line).empty()) continue;
        if (auto d = parse_gate_line(line)) return *d;
        out_ << "Not understood. A rejection needs feedback text.\n";
    }
}

}  // namespace reqforge::pipeline
