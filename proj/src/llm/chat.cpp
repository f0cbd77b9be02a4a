#include "reqforge/llm/chat.hpp"

#include <cmath>

namespace reqforge::llm {

std::string_view to_string(Role role) {
    switch (role) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
    }
    return "user";
}

std::optional<Role> role_from_string(std::string_view s) {
    if (s == "system") return Role::System;
    if (s == "user") return Role::User;
    if (s == "assistant") return Role::Assistant;
    return std::nullopt;
}

std::string_view to_string(FinishReason reason) {
    switch (reason) {
        case FinishReason::Stop: return "stop";
        case FinishReason::Length: return "length";
        case FinishReason::Error: return "error";
    }
    return "error";
}

std::vector<std::string> request_violations(const ChatRequest& request) {
    std::vector<std::string> out;
    if (request.messages.empty()) out.emplace_back("messages must not be empty");
    for (std::size_t i = 0; i < request.messages.size(); ++i) {
        const auto& m = request.messages[i];
        if (m.content.empty()) out.push_back("message " + std::to_string(i) + " has empty content");
        if (m.role == Role::System && i != 0) {
            out.push_back("system message at position " + std::to_string(i) + "; only the first message may be system");
        }
    }
    if (request.temperature && !(*request.temperature >= 0.0 && std::isfinite(*request.temperature))) {
        out.emplace_back("temperature must be >= 0");
    }
    if (request.max_tokens && *request.max_tokens <= 0) out.emplace_back("max_tokens must be positive");
    return out;
}

std::string flatten(const ChatRequest& request) {
    std::string out;
    for (const auto& m : request.messages) {
        if (!out.empty()) out += '\n';
        out += m.content;
    }
    return out;
}

std::vector<std::string> config_violations(const ProviderConfig& config) {
    std::vector<std::string> out;
    if (!(config.default_temperature >= 0.0)) out.emplace_back("default_temperature must be >= 0");
    if (config.default_max_tokens <= 0) out.emplace_back("default_max_tokens must be positive");
    if (config.transport_timeout_s <= 0) out.emplace_back("transport_timeout_s must be positive");
    if (config.transport_retries < 0) out.emplace_back("transport_retries must be >= 0");
    if (config.retry_backoff_ms < 0) out.emplace_back("retry_backoff_ms must be >= 0");
    if (config.provider.empty()) out.emplace_back("provider name must not be empty");
    return out;
}

}  // namespace reqforge::llm
