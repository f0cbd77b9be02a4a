#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reqforge::llm {

enum class Role { System, User, Assistant };

std::string_view to_string(Role role);
std::optional<Role> role_from_string(std::string_view s);

struct ChatMessage {
    Role role = Role::User;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

/// Unset sampling fields fall back to the provider defaults (temperature 0, 4096 tokens).
struct ChatRequest {
    std::vector<ChatMessage> messages;
    std::optional<double> temperature;
    std::optional<int> max_tokens;
    std::string model;  // empty: provider model

    bool operator==(const ChatRequest&) const = default;
};

std::vector<std::string> request_violations(const ChatRequest& request);

/// All message contents joined by newlines; this is what transcript hints match against.
std::string flatten(const ChatRequest& request);

enum class FinishReason { Stop, Length, Error };

std::string_view to_string(FinishReason reason);

struct ChatResponse {
    std::string content;
    FinishReason finish_reason = FinishReason::Stop;
    std::map<std::string, std::string> provider_meta;

    bool operator==(const ChatResponse&) const = default;
};

struct ProviderConfig {
    std::string provider = "openai";  // adapter name, or "mock"
    std::string endpoint_url;
    std::string api_key_env_var;
    std::string model;
    double default_temperature = 0.0;
    int default_max_tokens = 4096;
    int transport_timeout_s = 120;
    int transport_retries = 2;
    int retry_backoff_ms = 1000;

    bool operator==(const ProviderConfig&) const = default;
};

std::vector<std::string> config_violations(const ProviderConfig& config);

class GatewayError : public std::runtime_error {
public:
    enum class Kind { InvalidRequest, Config, Transport, Provider, TranscriptExhausted, TranscriptMismatch };

    GatewayError(Kind kind, const std::string& message, int status = 0, std::string body_excerpt = {})
        : std::runtime_error(message), kind_(kind), status_(status), body_excerpt_(std::move(body_excerpt)) {}

    Kind kind() const noexcept { return kind_; }
    bool retryable() const noexcept { return kind_ == Kind::Transport; }
    int status() const noexcept { return status_; }
    const std::string& body_excerpt() const noexcept { return body_excerpt_; }

private:
    Kind kind_;
    int status_;
    std::string body_excerpt_;
};

}  // namespace reqforge::llm
