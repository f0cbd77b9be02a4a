#pragma once

#include <chrono>
#include <functional>
#include <memory>

#include "reqforge/llm/chat.hpp"

namespace reqforge::llm {

/// Something that can answer a fully resolved chat request.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual std::string name() const = 0;
    /// `request` always carries temperature, max_tokens and model.
    virtual ChatResponse send(const ChatRequest& request) = 0;
};

/// Validates requests, applies provider defaults and retries transport failures.
/// Safe to share between sessions as long as the backend is.
class Gateway {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    Gateway(ProviderConfig config, std::shared_ptr<ChatBackend> backend);

    ChatResponse complete(const ChatRequest& request);

    /// Copy of `request` with every unset field filled from the config.
    ChatRequest resolve(const ChatRequest& request) const;

    const ProviderConfig& config() const noexcept { return config_; }
    ChatBackend& backend() noexcept { return *backend_; }
    void set_sleeper(Sleeper sleeper) { sleep_ = std::move(sleeper); }

private:
    ProviderConfig config_;
    std::shared_ptr<ChatBackend> backend_;
    Sleeper sleep_;
};

/// Gateway over the HTTP adapter named by `config.provider`.
std::shared_ptr<Gateway> make_http_gateway(const ProviderConfig& config);

}  // namespace reqforge::llm
