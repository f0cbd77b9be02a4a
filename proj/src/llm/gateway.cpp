#include "reqforge/llm/gateway.hpp"

#include <sstream>
#include <thread>

#include "reqforge/common/text.hpp"
#include "reqforge/llm/http_backend.hpp"

namespace reqforge::llm {

namespace {

std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

Gateway::Gateway(ProviderConfig config, std::shared_ptr<ChatBackend> backend)
    : config_(std::move(config)), backend_(std::move(backend)),
      sleep_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {
    if (auto v = config_violations(config_); !v.empty()) {
        throw GatewayError(GatewayError::Kind::Config, "invalid provider config: " + text::join(v, "; "));
    }
    if (!backend_) throw GatewayError(GatewayError::Kind::Config, "gateway needs a backend");
}

ChatRequest Gateway::resolve(const ChatRequest& request) const {
    ChatRequest out = request;
    if (!out.temperature) out.temperature = config_.default_temperature;
    if (!out.max_tokens) out.max_tokens = config_.default_max_tokens;
    if (out.model.empty()) out.model = config_.model;
    return out;
}

ChatResponse Gateway::complete(const ChatRequest& request) {
    if (auto v = request_violations(request); !v.empty()) {
        throw GatewayError(GatewayError::Kind::InvalidRequest, "invalid chat request: " + text::join(v, "; "));
    }
    const ChatRequest resolved = resolve(request);
    for (int attempt = 0;; ++attempt) {
        try {
            ChatResponse response = backend_->send(resolved);
            response.provider_meta["provider"] = backend_->name();
            response.provider_meta["temperature"] = format_number(*resolved.temperature);
            response.provider_meta["max_tokens"] = std::to_string(*resolved.max_tokens);
            if (!resolved.model.empty()) response.provider_meta["model"] = resolved.model;
            response.provider_meta["transport_attempts"] = std::to_string(attempt + 1);
            return response;
        } catch (const GatewayError& e) {
            if (!e.retryable() || attempt >= config_.transport_retries) throw;
            sleep_(std::chrono::milliseconds(config_.retry_backoff_ms));
        }
    }
}

std::shared_ptr<Gateway> make_http_gateway(const ProviderConfig& config) {
    return std::make_shared<Gateway>(config, std::make_shared<HttpBackend>(config));
}

}  // namespace reqforge::llm
