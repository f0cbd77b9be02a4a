#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace reqforge::agents {

/// A bundled, immutable text resource and the manifest data describing it.
struct KnowledgeResource {
    std::string name;
    std::vector<std::string> consumers;
    std::string sha256;  // as listed in the manifest
    std::string_view text;
};

const std::vector<KnowledgeResource>& knowledge_bundle();

/// Throws std::out_of_range for names missing from the bundle.
std::string_view knowledge_text(std::string_view name);

/// One message per resource whose content hash disagrees with the manifest, or that is
/// listed without being bundled.
std::vector<std::string> verify_knowledge_bundle();

}  // namespace reqforge::agents
