#pragma once

#include <string>

#include "reqforge/pipeline/types.hpp"

namespace reqforge::pipeline {

/// Human-readable view of an artifact for the terminal gate.
std::string render_artifact(const StageArtifact& artifact);

}  // namespace reqforge::pipeline
