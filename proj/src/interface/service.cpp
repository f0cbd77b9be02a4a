#include "reqforge/interface/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <iostream>

#include "reqforge/pipeline/serialize.hpp"

namespace reqforge::interface {
namespace {

using nlohmann::json;
using pipeline::PipelineSession;
using pipeline::SessionStatus;

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(2), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
    send_json(res, status, {{"error", message}});
}

bool terminal(SessionStatus s) { return s == SessionStatus::Completed || s == SessionStatus::Failed; }

std::string sse_frame(const json& event) {
    return "id: " + std::to_string(event.at("seq").get<std::size_t>()) + "\nevent: " +
           event.at("event").get<std::string>() + "\ndata: " + event.dump() + "\n\n";
}

}  // namespace

struct ReviewService::Slot {
    std::mutex m;
    std::condition_variable cv;
    PipelineSession session;
    std::shared_ptr<llm::Gateway> gateway;
    bool busy = false;
    std::thread worker;
    std::vector<json> events;  // seq is position + 1
};

SessionSummary summarize(const PipelineSession& s) {
    return {s.id, s.status, s.current_stage, s.config.prompt_kind, s.created_at, s.history.size()};
}

json summary_to_json(const SessionSummary& s) {
    return {{"id", s.id},
            {"status", pipeline::to_string(s.status)},
            {"current_stage", pipeline::to_string(s.current_stage)},
            {"prompt_kind", to_string(s.prompt_kind)},
            {"created_at", format_timestamp(s.created_at)},
            {"stage_count", s.stage_count}};
}

ReviewService::ReviewService(ServiceOptions options)
    : options_(std::move(options)), store_(options_.store_root), server_(std::make_unique<httplib::Server>()) {
    routes();
    std::vector<std::shared_ptr<Slot>> resume;
    for (const auto& id : store_.list_ids()) {
        try {
            auto slot = install(store_.load(id), nullptr);
            if (slot->session.status == SessionStatus::Running) resume.push_back(slot);
        } catch (const std::exception& e) {
            load_errors_.push_back(id + ": " + e.what());
        }
    }
    for (const auto& slot : resume) {
        slot->busy = true;
        start_worker(slot);
    }
}

ReviewService::~ReviewService() { stop(); }

std::shared_ptr<ReviewService::Slot> ReviewService::install(PipelineSession session,
                                                            std::shared_ptr<llm::Gateway> gateway) {
    auto slot = std::make_shared<Slot>();
    slot->session = std::move(session);
    slot->gateway = std::move(gateway);
    std::lock_guard lock(mutex_);
    const auto id = slot->session.id;
    if (slots_.count(id)) throw std::invalid_argument("session " + id + " already exists");
    slots_[id] = slot;
    return slot;
}

std::shared_ptr<ReviewService::Slot> ReviewService::find(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = slots_.find(id);
    return it == slots_.end() ? nullptr : it->second;
}

void ReviewService::record(Slot& slot, const PipelineSession& session, const pipeline::SessionEvent& event) {
    try {
        store_.save(session);
    } catch (const std::exception& e) {
        std::cerr << "reqforge: could not persist session " << session.id << ": " << e.what() << "\n";
    }
    std::lock_guard lock(slot.m);
    slot.session = session;
    slot.events.push_back({{"seq", slot.events.size() + 1},
                           {"event", pipeline::to_string(event.kind)},
                           {"stage", pipeline::to_string(event.stage)},
                           {"attempt", event.attempt},
                           {"detail", event.detail},
                           {"status", pipeline::to_string(session.status)}});
    slot.cv.notify_all();
}

// The caller has already marked the slot busy.
void ReviewService::start_worker(const std::shared_ptr<Slot>& slot) {
    std::thread previous;
    {
        std::lock_guard lock(slot->m);
        previous = std::move(slot->worker);
    }
    if (previous.joinable()) previous.join();

    std::lock_guard lock(slot->m);
    slot->worker = std::thread([this, slot] {
        PipelineSession session;
        std::shared_ptr<llm::Gateway> gateway;
        {
            std::lock_guard inner(slot->m);
            session = slot->session;
            gateway = slot->gateway;
        }
        try {
            if (!gateway) {
                if (!options_.gateways) throw std::runtime_error("no gateway configured for session " + session.id);
                gateway = options_.gateways(session.config);
                std::lock_guard inner(slot->m);
                slot->gateway = gateway;
            }
            pipeline::Engine engine(gateway, options_.clock,
                                    [this, slot](const PipelineSession& s, const pipeline::SessionEvent& e) { record(*slot, s, e); });
            bool stopping;
            {
                std::lock_guard guard(mutex_);
                stopping = stopping_;
            }
            while (session.status == SessionStatus::Running && !stopping) {
                engine.run_stage(session);
                std::lock_guard guard(mutex_);
                stopping = stopping_;
            }
        } catch (const pipeline::StageFailure&) {
            // Already recorded through the event sink.
        } catch (const std::exception& e) {
            std::cerr << "reqforge: session " << session.id << " stopped: " << e.what() << "\n";
        }
        std::lock_guard inner(slot->m);
        slot->busy = false;
        slot->cv.notify_all();
    });
}

std::string ReviewService::create_session(pipeline::SessionConfig config, std::string id) {
    if (!id.empty() && !pipeline::valid_session_id(id)) throw std::invalid_argument("invalid session id " + id);
    if (!options_.gateways) throw std::runtime_error("service has no gateway factory");
    auto session = pipeline::start_session(config, std::move(id), options_.clock);
    if (find(session.id) || store_.exists(session.id)) throw std::invalid_argument("session " + session.id + " already exists");
    auto gateway = options_.gateways(session.config);
    session.config.provider = gateway->config();
    store_.save(session);
    auto slot = install(std::move(session), std::move(gateway));
    slot->busy = true;
    start_worker(slot);
    return slot->session.id;
}

void ReviewService::adopt(PipelineSession session, std::shared_ptr<llm::Gateway> gateway) {
    store_.save(session);
    auto slot = install(std::move(session), std::move(gateway));
    std::unique_lock lock(slot->m);
    if (slot->session.status != SessionStatus::Running) return;
    slot->busy = true;
    lock.unlock();
    start_worker(slot);
}

std::optional<PipelineSession> ReviewService::snapshot(const std::string& id) const {
    auto slot = find(id);
    if (!slot) return std::nullopt;
    std::lock_guard lock(slot->m);
    return slot->session;
}

std::vector<SessionSummary> ReviewService::list() const {
    std::vector<std::shared_ptr<Slot>> slots;
    {
        std::lock_guard lock(mutex_);
        for (const auto& [_, s] : slots_) slots.push_back(s);
    }
    std::vector<SessionSummary> out;
    for (const auto& s : slots) {
        std::lock_guard lock(s->m);
        out.push_back(summarize(s->session));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(a.created_at, a.id) < std::tie(b.created_at, b.id);
    });
    return out;
}

bool ReviewService::wait_for(const std::string& id, const std::function<bool(const PipelineSession&)>& pred,
                             std::chrono::milliseconds timeout) {
    auto slot = find(id);
    if (!slot) return false;
    std::unique_lock lock(slot->m);
    return slot->cv.wait_for(lock, timeout, [&] { return !slot->busy && pred(slot->session); });
}

ReviewService::GateResult ReviewService::submit_gate(const std::string& id, pipeline::GateDecision decision,
                                                    std::string& message) {
    auto slot = find(id);
    if (!slot) {
        message = "no session " + id;
        return GateResult::NotFound;
    }
    if (auto v = pipeline::decision_violations(decision); !v.empty()) {
        message = v.front();
        return GateResult::Invalid;
    }
    PipelineSession session;
    std::shared_ptr<llm::Gateway> gateway;
    {
        std::lock_guard lock(slot->m);
        if (slot->busy || slot->session.status != SessionStatus::AwaitingGate) {
            message = "session is " + std::string(pipeline::to_string(slot->session.status)) +
                      (slot->busy ? " and busy" : "") + ", no gate is pending";
            return GateResult::Conflict;
        }
        slot->busy = true;
        session = slot->session;
        gateway = slot->gateway;
    }
    // The gate itself needs no model call; the engine only uses the gateway for later stages.
    pipeline::Engine engine(gateway, options_.clock,
                            [this, slot](const PipelineSession& s, const pipeline::SessionEvent& e) { record(*slot, s, e); });
    try {
        engine.submit_gate(session, std::move(decision));
    } catch (const std::exception& e) {
        std::lock_guard lock(slot->m);
        slot->busy = false;
        slot->cv.notify_all();
        message = e.what();
        return GateResult::Conflict;
    }
    if (session.status == SessionStatus::Running) {
        start_worker(slot);
    } else {
        std::lock_guard lock(slot->m);
        slot->busy = false;
        slot->cv.notify_all();
    }
    return GateResult::Applied;
}

void ReviewService::routes() {
    auto& srv = *server_;

    srv.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
        if (options_.token.empty() || req.path.rfind("/api/", 0) != 0) return httplib::Server::HandlerResponse::Unhandled;
        const auto expected = "Bearer " + options_.token;
        const bool header_ok = req.get_header_value("Authorization") == expected;
        const bool query_ok = req.has_param("token") && req.get_param_value("token") == options_.token;
        if (header_ok || query_ok) return httplib::Server::HandlerResponse::Unhandled;
        res.set_header("WWW-Authenticate", "Bearer");
        send_error(res, 401, "missing or wrong bearer token");
        return httplib::Server::HandlerResponse::Handled;
    });

    srv.Get("/api/sessions", [this](const httplib::Request&, httplib::Response& res) {
        json out = json::array();
        for (const auto& s : list()) out.push_back(summary_to_json(s));
        send_json(res, 200, out);
    });

    srv.Post("/api/sessions", [this](const httplib::Request& req, httplib::Response& res) {
        auto body = json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.is_object()) return send_error(res, 400, "body must be a JSON object");
        try {
            const auto& cfg_json = body.contains("config") ? body["config"] : body;
            if (!cfg_json.is_object()) return send_error(res, 400, "config must be a JSON object");
            auto config = pipeline::config_from_json(cfg_json);
            if (!cfg_json.contains("gate_policy") || config.gate_policy == pipeline::GatePolicy::Interactive) {
                config.gate_policy = pipeline::GatePolicy::Serve;
            }
            const auto id = create_session(std::move(config), body.value("id", std::string{}));
            send_json(res, 201, {{"id", id}});
        } catch (const pipeline::ConfigError& e) {
            send_json(res, 400, {{"error", "invalid session config"}, {"violations", e.violations()}});
        } catch (const std::exception& e) {
            send_error(res, 400, e.what());
        }
    });

    srv.Get(R"(/api/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        auto s = snapshot(req.matches[1]);
        if (!s) return send_error(res, 404, "no session " + std::string(req.matches[1]));
        send_json(res, 200, pipeline::session_to_json(*s));
    });

    srv.Get(R"(/api/sessions/([^/]+)/artifacts/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
        auto s = snapshot(req.matches[1]);
        if (!s) return send_error(res, 404, "no session " + std::string(req.matches[1]));
        const auto n = std::stoul(req.matches[2]);
        if (n < 1 || n > s->history.size()) return send_error(res, 404, "no artifact " + std::string(req.matches[2]));
        const auto& entry = s->history[n - 1];
        auto body = pipeline::artifact_to_json(entry.artifact);
        body["index"] = n;
        body["decision"] = entry.decision ? pipeline::decision_to_json(*entry.decision) : json(nullptr);
        send_json(res, 200, body);
    });

    srv.Post(R"(/api/sessions/([^/]+)/gate)", [this](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        if (!find(id)) return send_error(res, 404, "no session " + id);
        auto body = json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.is_object() || !body.contains("verdict") || !body["verdict"].is_string()) {
            return send_error(res, 400, "body must be {\"verdict\": \"approve\" | \"reject\", \"feedback\": ...}");
        }
        const auto verdict = pipeline::verdict_from_string(body["verdict"].get<std::string>());
        if (!verdict) return send_error(res, 400, "unknown verdict");
        pipeline::GateDecision decision{*verdict, std::nullopt, {}};
        if (body.contains("feedback") && body["feedback"].is_string()) decision.feedback = body["feedback"].get<std::string>();
        std::string message;
        switch (submit_gate(id, std::move(decision), message)) {
            case GateResult::Applied: {
                auto s = snapshot(id);
                return send_json(res, 200, summary_to_json(summarize(*s)));
            }
            case GateResult::NotFound: return send_error(res, 404, message);
            case GateResult::Conflict: return send_error(res, 409, message);
            case GateResult::Invalid: return send_error(res, 400, message);
        }
    });

    srv.Get(R"(/api/sessions/([^/]+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
        auto slot = find(req.matches[1]);
        if (!slot) return send_error(res, 404, "no session " + std::string(req.matches[1]));
        std::size_t after = 0;
        try {
            if (req.has_header("Last-Event-ID")) after = std::stoul(req.get_header_value("Last-Event-ID"));
            if (req.has_param("after")) after = std::stoul(req.get_param_value("after"));
        } catch (const std::exception&) {
            return send_error(res, 400, "bad event position");
        }
        auto cursor = std::make_shared<std::size_t>(after);
        auto greeted = std::make_shared<bool>(false);
        res.set_header("Cache-Control", "no-cache");
        res.set_chunked_content_provider("text/event-stream", [this, slot, cursor, greeted](std::size_t, httplib::DataSink& sink) {
            std::string chunk;
            bool finished = false;
            {
                std::unique_lock lock(slot->m);
                if (!*greeted) {
                    *greeted = true;
                    chunk = "event: snapshot\ndata: " + summary_to_json(summarize(slot->session)).dump() + "\n\n";
                } else {
                    slot->cv.wait_for(lock, options_.heartbeat, [&] {
                        std::lock_guard guard(mutex_);
                        return slot->events.size() > *cursor || stopping_ || (!slot->busy && terminal(slot->session.status));
                    });
                    for (; *cursor < slot->events.size(); ++*cursor) chunk += sse_frame(slot->events[*cursor]);
                    if (chunk.empty()) chunk = ": heartbeat\n\n";
                }
                std::lock_guard guard(mutex_);
                finished = stopping_ || (!slot->busy && terminal(slot->session.status) && *cursor >= slot->events.size());
            }
            if (!sink.write(chunk.data(), chunk.size())) return false;
            if (finished) sink.done();
            return true;
        });
    });

    if (options_.ui_dir) {
        if (!srv.set_mount_point("/ui", options_.ui_dir->string())) {
            std::cerr << "reqforge: ui directory " << options_.ui_dir->string() << " not found\n";
        }
        srv.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_redirect("/ui/"); });
    }
}

int ReviewService::start(const std::string& host, int port) {
    const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    listener_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return bound;
}

bool ReviewService::listen(const std::string& host, int port) { return server_->listen(host, port); }

void ReviewService::stop() {
    {
        std::lock_guard lock(mutex_);
        if (stopping_) return;
        stopping_ = true;
    }
    std::vector<std::shared_ptr<Slot>> slots;
    {
        std::lock_guard lock(mutex_);
        for (const auto& [_, s] : slots_) slots.push_back(s);
    }
    for (const auto& s : slots) {
        std::lock_guard lock(s->m);
        s->cv.notify_all();
    }
    server_->stop();
    if (listener_.joinable()) listener_.join();
    for (const auto& s : slots) {
        std::thread worker;
        {
            std::lock_guard lock(s->m);
            worker = std::move(s->worker);
        }
        if (worker.joinable()) worker.join();
    }
}

}  // namespace reqforge::interface
