#include "reqforge/agents/knowledge.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "reqforge/common/embedded.hpp"
#include "reqforge/common/text.hpp"

namespace reqforge::agents {
namespace {

std::string_view embedded(std::string_view name) {
    for (std::size_t i = 0; i < detail::kEmbeddedFileCount; ++i) {
        const auto& f = detail::kEmbeddedFiles[i];
        if (name == f.name) return {reinterpret_cast<const char*>(f.data), f.size};
    }
    return {};
}

bool is_embedded(std::string_view name) {
    for (std::size_t i = 0; i < detail::kEmbeddedFileCount; ++i) {
        if (name == detail::kEmbeddedFiles[i].name) return true;
    }
    return false;
}

std::vector<KnowledgeResource> load_bundle() {
    const auto manifest = nlohmann::json::parse(embedded("manifest.json"));
    std::vector<KnowledgeResource> out;
    for (const auto& entry : manifest.at("resources")) {
        KnowledgeResource r;
        r.name = entry.at("file").get<std::string>();
        r.consumers = entry.at("consumers").get<std::vector<std::string>>();
        r.sha256 = entry.at("sha256").get<std::string>();
        r.text = embedded(r.name);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

const std::vector<KnowledgeResource>& knowledge_bundle() {
    static const std::vector<KnowledgeResource> bundle = load_bundle();
    return bundle;
}

std::string_view knowledge_text(std::string_view name) {
    const auto& bundle = knowledge_bundle();
    auto it = std::find_if(bundle.begin(), bundle.end(), [&](const auto& r) { return r.name == name; });
    if (it == bundle.end()) throw std::out_of_range("no bundled knowledge resource named " + std::string(name));
    return it->text;
}

std::vector<std::string> verify_knowledge_bundle() {
    std::vector<std::string> problems;
    for (const auto& r : knowledge_bundle()) {
        if (!is_embedded(r.name)) {
            problems.push_back(r.name + ": listed in manifest but not bundled");
            continue;
        }
        const auto actual = text::sha256_hex(r.text);
        if (actual != r.sha256) problems.push_back(r.name + ": hash " + actual + " does not match manifest");
    }
    return problems;
}

}  // namespace reqforge::agents
