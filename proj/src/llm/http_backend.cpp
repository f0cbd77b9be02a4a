#include "reqforge/llm/http_backend.hpp"

#include <httplib.h>

#include <array>
#include <cstdlib>
#include <regex>

#include "reqforge/common/text.hpp"

namespace reqforge::llm {

namespace {

using nlohmann::json;

FinishReason finish_from(std::string_view reason) {
    if (reason == "stop" || reason == "end_turn" || reason == "stop_sequence") return FinishReason::Stop;
    if (reason == "length" || reason == "max_tokens") return FinishReason::Length;
    return FinishReason::Error;
}

json encode_openai(const ChatRequest& r) {
    json messages = json::array();
    for (const auto& m : r.messages) messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
    return {{"model", r.model}, {"messages", messages}, {"temperature", *r.temperature}, {"max_tokens", *r.max_tokens}};
}

ChatResponse decode_openai(const json& body) {
    const auto& choice = body.at("choices").at(0);
    ChatResponse out;
    const auto& content = choice.at("message").at("content");
    out.content = content.is_string() ? content.get<std::string>() : std::string();
    out.finish_reason = finish_from(choice.value("finish_reason", "stop"));
    if (body.contains("id") && body["id"].is_string()) out.provider_meta["response_id"] = body["id"];
    if (body.contains("usage")) out.provider_meta["usage"] = body["usage"].dump();
    return out;
}

json encode_anthropic(const ChatRequest& r) {
    json messages = json::array();
    json body = {{"model", r.model}, {"temperature", *r.temperature}, {"max_tokens", *r.max_tokens}};
    for (const auto& m : r.messages) {
        if (m.role == Role::System) {
            body["system"] = m.content;
        } else {
            messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
        }
    }
    body["messages"] = messages;
    return body;
}

ChatResponse decode_anthropic(const json& body) {
    ChatResponse out;
    for (const auto& block : body.at("content")) {
        if (block.value("type", "") == "text") out.content += block.at("text").get<std::string>();
    }
    out.finish_reason = finish_from(body.value("stop_reason", "end_turn"));
    if (body.contains("id") && body["id"].is_string()) out.provider_meta["response_id"] = body["id"];
    if (body.contains("usage")) out.provider_meta["usage"] = body["usage"].dump();
    return out;
}

HeaderList bearer(const std::string& key) { return {{"Authorization", "Bearer " + key}}; }

const std::array<ProviderAdapter, 3>& adapters() {
    static const std::array<ProviderAdapter, 3> table = {
        ProviderAdapter{"openai", "https://api.openai.com/v1/chat/completions", "OPENAI_API_KEY", "gpt-4o",
                        encode_openai, bearer, decode_openai},
        ProviderAdapter{"qwen", "https://dashscope-intl.aliyuncs.com/compatible-mode/v1/chat/completions",
                        "DASHSCOPE_API_KEY", "qwen-max", encode_openai, bearer, decode_openai},
        ProviderAdapter{"anthropic", "https://api.anthropic.com/v1/messages", "ANTHROPIC_API_KEY",
                        "claude-3-5-sonnet-latest", encode_anthropic,
                        [](const std::string& key) {
                            return HeaderList{{"x-api-key", key}, {"anthropic-version", "2023-06-01"}};
                        },
                        decode_anthropic},
    };
    return table;
}

struct ParsedUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

ParsedUrl split_url(const std::string& url) {
    static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
    std::smatch m;
    if (!std::regex_match(url, m, re)) {
        throw GatewayError(GatewayError::Kind::Config, "malformed endpoint url: " + url);
    }
    return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

}  // namespace

const ProviderAdapter& find_adapter(std::string_view name) {
    for (const auto& a : adapters()) {
        if (a.name == name) return a;
    }
    throw GatewayError(GatewayError::Kind::Config, "unknown provider \"" + std::string(name) +
                                                       "\"; known: " + text::join(adapter_names(), ", "));
}

std::vector<std::string> adapter_names() {
    std::vector<std::string> out;
    for (const auto& a : adapters()) out.push_back(a.name);
    return out;
}

ProviderConfig provider_preset(std::string_view name) {
    const auto& a = find_adapter(name);
    ProviderConfig c;
    c.provider = a.name;
    c.endpoint_url = a.default_endpoint;
    c.api_key_env_var = a.default_key_env;
    c.model = a.default_model;
    return c;
}

HttpBackend::HttpBackend(ProviderConfig config) : config_(std::move(config)), adapter_(&find_adapter(config_.provider)) {
    if (config_.endpoint_url.empty()) config_.endpoint_url = adapter_->default_endpoint;
    if (config_.api_key_env_var.empty()) config_.api_key_env_var = adapter_->default_key_env;
    if (config_.model.empty()) config_.model = adapter_->default_model;
    split_url(config_.endpoint_url);
}

ChatResponse HttpBackend::send(const ChatRequest& request) {
    const char* key = std::getenv(config_.api_key_env_var.c_str());
    if (key == nullptr || *key == '\0') {
        throw GatewayError(GatewayError::Kind::Config,
                           "environment variable " + config_.api_key_env_var + " is not set");
    }
    ChatRequest resolved = request;
    if (resolved.model.empty()) resolved.model = config_.model;

    const auto url = split_url(config_.endpoint_url);
    httplib::Client client(url.origin);
    client.set_connection_timeout(config_.transport_timeout_s, 0);
    client.set_read_timeout(config_.transport_timeout_s, 0);
    client.set_write_timeout(config_.transport_timeout_s, 0);

    httplib::Headers headers;
    for (auto& [k, v] : adapter_->headers(key)) headers.emplace(k, v);

    const auto result = client.Post(url.path, headers, adapter_->encode(resolved).dump(), "application/json");
    if (!result) {
        throw GatewayError(GatewayError::Kind::Transport,
                           "transport failure calling " + config_.endpoint_url + ": " + httplib::to_string(result.error()));
    }
    if (result->status < 200 || result->status >= 300) {
        throw GatewayError(GatewayError::Kind::Provider,
                           config_.provider + " returned HTTP " + std::to_string(result->status) + ": " +
                               text::excerpt(result->body, 300),
                           result->status, text::excerpt(result->body, 300));
    }
    try {
        ChatResponse response = adapter_->decode(nlohmann::json::parse(result->body));
        response.provider_meta["http_status"] = std::to_string(result->status);
        return response;
    } catch (const nlohmann::json::exception& e) {
        throw GatewayError(GatewayError::Kind::Provider,
                           config_.provider + " returned an unreadable body: " + e.what(), result->status,
                           text::excerpt(result->body, 300));
    }
}

}  // namespace reqforge::llm
