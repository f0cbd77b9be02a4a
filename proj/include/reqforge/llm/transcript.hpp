#pragma once

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "reqforge/llm/gateway.hpp"

namespace reqforge::llm {

inline constexpr std::string_view kWildcardHint = "*";

struct TranscriptEntry {
    std::string match_hint;  // substring of the flattened request, or "*"
    std::string response;

    bool operator==(const TranscriptEntry&) const = default;
};

/// Scripted replies consumed strictly in order. Single consumer.
struct ScriptedTranscript {
    std::vector<TranscriptEntry> entries;
    std::size_t cursor = 0;

    bool exhausted() const noexcept { return cursor >= entries.size(); }
};

/// Returns the entry at the cursor and advances it by one.
/// Throws GatewayError(TranscriptExhausted) or GatewayError(TranscriptMismatch); the cursor
/// does not move on error.
ChatResponse replay(ScriptedTranscript& transcript, const ChatRequest& request);

/// {"entries": [{"match": "...", "response": "..."}]}
ScriptedTranscript transcript_from_json(const nlohmann::json& j);
nlohmann::json transcript_to_json(const ScriptedTranscript& transcript);
ScriptedTranscript load_transcript(const std::filesystem::path& path);

/// Deterministic backend replaying a transcript; keeps every request it saw.
class MockBackend : public ChatBackend {
public:
    explicit MockBackend(ScriptedTranscript transcript);

    std::string name() const override { return "mock"; }
    ChatResponse send(const ChatRequest& request) override;

    std::size_t cursor() const;
    std::vector<ChatRequest> requests() const;

private:
    mutable std::mutex mutex_;
    ScriptedTranscript transcript_;
    std::vector<ChatRequest> requests_;
};

/// Gateway with default (temperature 0, 4096 tokens) settings over a MockBackend.
std::shared_ptr<Gateway> make_mock_gateway(ScriptedTranscript transcript);

}  // namespace reqforge::llm
