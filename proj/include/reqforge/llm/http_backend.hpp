#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "reqforge/llm/gateway.hpp"

namespace reqforge::llm {

using HeaderList = std::vector<std::pair<std::string, std::string>>;

/// Per-provider differences in the chat-completion wire format.
struct ProviderAdapter {
    std::string name;
    std::string default_endpoint;
    std::string default_key_env;
    std::string default_model;
    std::function<nlohmann::json(const ChatRequest&)> encode;
    std::function<HeaderList(const std::string& api_key)> headers;
    std::function<ChatResponse(const nlohmann::json&)> decode;
};

/// Throws GatewayError(Config) for unknown names.
const ProviderAdapter& find_adapter(std::string_view name);
std::vector<std::string> adapter_names();

/// ProviderConfig with the adapter's endpoint, key variable and model filled in.
ProviderConfig provider_preset(std::string_view name);

class HttpBackend : public ChatBackend {
public:
    explicit HttpBackend(ProviderConfig config);

    std::string name() const override { return adapter_->name; }
    ChatResponse send(const ChatRequest& request) override;

private:
    ProviderConfig config_;
    const ProviderAdapter* adapter_;
};

}  // namespace reqforge::llm
