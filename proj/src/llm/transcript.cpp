#include "reqforge/llm/transcript.hpp"

#include <fstream>

#include "reqforge/common/text.hpp"

namespace reqforge::llm {

ChatResponse replay(ScriptedTranscript& transcript, const ChatRequest& request) {
    if (transcript.exhausted()) {
        throw GatewayError(GatewayError::Kind::TranscriptExhausted,
                           "scripted transcript exhausted after " + std::to_string(transcript.entries.size()) +
                               " replies");
    }
    const auto& entry = transcript.entries[transcript.cursor];
    const std::string flat = flatten(request);
    if (entry.match_hint != kWildcardHint && flat.find(entry.match_hint) == std::string::npos) {
        // The last message is the task-specific part, so show that rather than the shared preamble.
        const std::string received =
            request.messages.empty() ? std::string() : request.messages.back().content;
        throw GatewayError(GatewayError::Kind::TranscriptMismatch,
                           "transcript entry " + std::to_string(transcript.cursor) + " expects hint \"" +
                               entry.match_hint + "\" but request was: " + text::excerpt(received, 200));
    }
    ChatResponse response;
    response.content = entry.response;
    response.finish_reason = FinishReason::Stop;
    response.provider_meta["transcript_index"] = std::to_string(transcript.cursor);
    ++transcript.cursor;
    return response;
}

ScriptedTranscript transcript_from_json(const nlohmann::json& j) {
    ScriptedTranscript t;
    const auto& entries = j.is_array() ? j : j.at("entries");
    for (const auto& e : entries) {
        t.entries.push_back({e.at("match").get<std::string>(), e.at("response").get<std::string>()});
    }
    return t;
}

nlohmann::json transcript_to_json(const ScriptedTranscript& transcript) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : transcript.entries) entries.push_back({{"match", e.match_hint}, {"response", e.response}});
    return {{"entries", entries}};
}

ScriptedTranscript load_transcript(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw GatewayError(GatewayError::Kind::Config, "cannot read transcript " + path.string());
    try {
        return transcript_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw GatewayError(GatewayError::Kind::Config, "malformed transcript " + path.string() + ": " + e.what());
    }
}

MockBackend::MockBackend(ScriptedTranscript transcript) : transcript_(std::move(transcript)) {}

ChatResponse MockBackend::send(const ChatRequest& request) {
    std::lock_guard lock(mutex_);
    requests_.push_back(request);
    return replay(transcript_, request);
}

std::size_t MockBackend::cursor() const {
    std::lock_guard lock(mutex_);
    return transcript_.cursor;
}

std::vector<ChatRequest> MockBackend::requests() const {
    std::lock_guard lock(mutex_);
    return requests_;
}

std::shared_ptr<Gateway> make_mock_gateway(ScriptedTranscript transcript) {
    ProviderConfig config;
    config.provider = "mock";
    config.model = "scripted";
    config.retry_backoff_ms = 0;
    return std::make_shared<Gateway>(config, std::make_shared<MockBackend>(std::move(transcript)));
}

}  // namespace reqforge::llm
