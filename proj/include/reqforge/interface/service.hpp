#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "reqforge/llm/gateway.hpp"
#include "reqforge/pipeline/engine.hpp"
#include "reqforge/pipeline/store.hpp"

namespace httplib {
class Server;
}

namespace reqforge::interface {

/// Read-only projection of a session for listings.
struct SessionSummary {
    std::string id;
    pipeline::SessionStatus status;
    pipeline::StageId current_stage;
    PromptKind prompt_kind;
    Timestamp created_at;
    std::size_t stage_count;
};

SessionSummary summarize(const pipeline::PipelineSession& s);
nlohmann::json summary_to_json(const SessionSummary& s);

/// Gives every new session its own gateway; with a scripted transcript that means its own cursor.
using GatewayFactory = std::function<std::shared_ptr<llm::Gateway>(const pipeline::SessionConfig&)>;

struct ServiceOptions {
    std::filesystem::path store_root;
    std::optional<std::filesystem::path> ui_dir;
    std::string token;  // empty: no authentication
    GatewayFactory gateways;
    Clock clock = now_ms;
    std::chrono::milliseconds heartbeat{15000};
};

/// Local HTTP service over a session store. Every mutation goes through the pipeline engine and
/// is persisted before it becomes visible. Sessions found Running on start-up are resumed.
class ReviewService {
public:
    explicit ReviewService(ServiceOptions options);
    ~ReviewService();

    ReviewService(const ReviewService&) = delete;
    ReviewService& operator=(const ReviewService&) = delete;

    /// Binds and serves on a background thread. Port 0 picks a free port; the bound port is returned.
    int start(const std::string& host, int port);
    /// Binds and serves on the calling thread until stop().
    bool listen(const std::string& host, int port);
    void stop();

    /// POST /api/sessions without HTTP. Throws pipeline::ConfigError.
    std::string create_session(pipeline::SessionConfig config, std::string id = {});
    /// Takes over an already started session, driven by `gateway`.
    void adopt(pipeline::PipelineSession session, std::shared_ptr<llm::Gateway> gateway);

    std::optional<pipeline::PipelineSession> snapshot(const std::string& id) const;
    std::vector<SessionSummary> list() const;
    /// Errors met while loading the store, one per skipped session.
    const std::vector<std::string>& load_errors() const noexcept { return load_errors_; }

    /// Blocks until the session is idle and `pred` holds on it, or the timeout passes.
    bool wait_for(const std::string& id, const std::function<bool(const pipeline::PipelineSession&)>& pred,
                  std::chrono::milliseconds timeout);

    enum class GateResult { Applied, NotFound, Conflict, Invalid };
    /// POST /api/sessions/{id}/gate without HTTP. `message` receives the reason for non-Applied results.
    GateResult submit_gate(const std::string& id, pipeline::GateDecision decision, std::string& message);

private:
    struct Slot;

    void routes();
    std::shared_ptr<Slot> find(const std::string& id) const;
    std::shared_ptr<Slot> install(pipeline::PipelineSession session, std::shared_ptr<llm::Gateway> gateway);
    void start_worker(const std::shared_ptr<Slot>& slot);
    void record(Slot& slot, const pipeline::PipelineSession& session, const pipeline::SessionEvent& event);

    ServiceOptions options_;
    pipeline::SessionStore store_;
    std::unique_ptr<httplib::Server> server_;
    std::thread listener_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Slot>> slots_;
    std::vector<std::string> load_errors_;
    bool stopping_ = false;
};

}  // namespace reqforge::interface
