#include "reqforge/interface/cli.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "reqforge/interface/service.hpp"
#include "reqforge/judge/batch.hpp"
#include "reqforge/judge/csuq.hpp"
#include "reqforge/llm/http_backend.hpp"
#include "reqforge/llm/transcript.hpp"
#include "reqforge/pipeline/gates.hpp"
#include "reqforge/pipeline/serialize.hpp"
#include "reqforge/pipeline/store.hpp"

namespace reqforge::interface {
namespace fs = std::filesystem;
namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + path.string());
    out << content;
}

nlohmann::json read_json_file(const fs::path& path) {
    auto j = nlohmann::json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) throw UsageError(path.string() + " is not valid JSON");
    return j;
}

llm::ScriptedTranscript read_transcript(const fs::path& path) {
    try {
        return llm::load_transcript(path);
    } catch (const std::exception& e) {
        throw UsageError("cannot load transcript " + path.string() + ": " + e.what());
    }
}

llm::ProviderConfig provider_config(const std::string& name) {
    try {
        auto config = llm::provider_preset(name);
        if (!std::getenv(config.api_key_env_var.c_str())) {
            throw UsageError("provider " + name + " needs the API key in $" + config.api_key_env_var);
        }
        return config;
    } catch (const llm::GatewayError& e) {
        throw UsageError(e.what());
    }
}

GatewayFactory gateway_factory(const std::string& mock, const std::string& provider) {
    if (!mock.empty()) {
        auto transcript = read_transcript(mock);
        return [transcript](const pipeline::SessionConfig&) { return llm::make_mock_gateway(transcript); };
    }
    const auto preset = provider_config(provider.empty() ? "openai" : provider);
    auto shared = llm::make_http_gateway(preset);
    return [shared](const pipeline::SessionConfig&) { return shared; };
}

struct RunArgs {
    std::string kind = "user";
    std::string input;
    std::string gate = "auto";
    std::vector<std::string> skip;
    int question_budget = 3;
    int refine = 1;
    std::string template_marker;
    std::string provider;
    std::string mock;
    std::string out;
    std::string store;
    std::string host = "127.0.0.1";
    int port = 8765;
    std::string session_id;
    bool user_guidance = false;
};

int cmd_run(const RunArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
    pipeline::SessionConfig config;
    const auto kind = prompt_kind_from_string(a.kind);
    if (!kind) throw UsageError("--kind must be user or system");
    config.prompt_kind = *kind;
    const auto policy = pipeline::gate_policy_from_string(a.gate);
    if (!policy) throw UsageError("--gate must be auto, interactive or serve");
    config.gate_policy = *policy;
    if (a.input == "-" && config.gate_policy == pipeline::GatePolicy::Interactive) {
        throw UsageError("--input - cannot be combined with --gate interactive, which reads decisions from stdin");
    }
    if (a.input == "-") {
        std::ostringstream ss;
        ss << in.rdbuf();
        config.initial_prompt = ss.str();
    } else {
        config.initial_prompt = read_file(a.input);
    }
    for (const auto& s : a.skip) {
        auto stage = pipeline::stage_from_string(s);
        if (!stage) throw UsageError("unknown stage \"" + s + "\"");
        config.skip_stages.insert(*stage);
    }
    config.question_budget = a.question_budget;
    config.refinement_rounds = a.refine;
    if (!a.template_marker.empty()) config.template_marker = a.template_marker;
    config.user_guidance = a.user_guidance;

    std::shared_ptr<llm::Gateway> gateway;
    if (!a.mock.empty()) {
        gateway = llm::make_mock_gateway(read_transcript(a.mock));
    } else {
        gateway = llm::make_http_gateway(provider_config(a.provider.empty() ? "openai" : a.provider));
    }
    config.provider = gateway->config();
    if (!a.session_id.empty() && !pipeline::valid_session_id(a.session_id)) throw UsageError("invalid --session-id");

    pipeline::PipelineSession session;
    try {
        session = pipeline::start_session(config, a.session_id);
    } catch (const pipeline::ConfigError& e) {
        throw UsageError(e.what());
    }
    err << "session " << session.id << "\n";

    if (config.gate_policy == pipeline::GatePolicy::Serve) {
        if (a.store.empty()) throw UsageError("--gate serve needs --store");
        ServiceOptions options;
        options.store_root = a.store;
        options.token = std::getenv("REQFORGE_TOKEN") ? std::getenv("REQFORGE_TOKEN") : "";
        const auto id = session.id;
        ReviewService service(std::move(options));
        const int port = service.start(a.host, a.port);
        err << "review service on http://" << a.host << ":" << port << "/ui/ ; waiting for gate decisions\n";
        service.adopt(std::move(session), gateway);
        service.wait_for(id, [](const pipeline::PipelineSession& s) {
            return s.status == pipeline::SessionStatus::Completed || s.status == pipeline::SessionStatus::Failed;
        }, std::chrono::hours(24 * 365));
        session = *service.snapshot(id);
        service.stop();
    } else {
        std::optional<pipeline::SessionStore> store;
        if (!a.store.empty()) store.emplace(a.store);
        pipeline::Engine engine(gateway, now_ms, [&](const pipeline::PipelineSession& s, const pipeline::SessionEvent& e) {
            if (store) store->save(s);
            if (e.kind == pipeline::EventKind::AttemptFailed) {
                err << to_string(e.stage) << " attempt " << e.attempt << " rejected: " << e.detail << "\n";
            }
        });
        if (store) store->save(session);
        pipeline::AutoApproveGate auto_gate;
        pipeline::StreamGate stream_gate(in, err);
        pipeline::GateProvider& gates =
            config.gate_policy == pipeline::GatePolicy::Interactive ? static_cast<pipeline::GateProvider&>(stream_gate)
                                                                    : auto_gate;
        try {
            engine.run_to_completion(session, gates);
        } catch (const pipeline::StageFailure& e) {
            err << "failed: " << e.what() << "\n";
            return kExitFailed;
        } catch (const pipeline::GateInputClosed& e) {
            err << "stopped: " << e.what() << "\n";
            return kExitFailed;
        }
    }

    if (session.status != pipeline::SessionStatus::Completed || !session.final_prompt) {
        err << "failed: " << session.failure_reason.value_or("session did not complete") << "\n";
        return kExitFailed;
    }
    if (a.out.empty()) {
        out << *session.final_prompt;
    } else {
        write_file(a.out, *session.final_prompt);
    }
    return kExitOk;
}

struct JudgeArgs {
    std::string kind;
    std::string in;
    std::string out;
    std::string json;
    std::string mock;
    std::string provider;
    std::string csuq_in;
    std::string mapping;
};

int cmd_judge(const JudgeArgs& a, std::ostream& out, std::ostream& err) {
    const auto kind = judge::doc_kind_from_string(a.kind);
    if (!kind) throw UsageError("--kind must be prd or sdd");
    if (a.in.empty()) throw UsageError("--in is required");
    std::error_code ec;
    if (!fs::is_directory(a.in, ec)) throw UsageError(a.in + " is not a directory");
    std::shared_ptr<llm::Gateway> gateway = !a.mock.empty()
                                                ? llm::make_mock_gateway(read_transcript(a.mock))
                                                : llm::make_http_gateway(provider_config(a.provider.empty() ? "openai" : a.provider));
    const auto report = judge::batch_score(a.in, *kind, *gateway);
    for (const auto& row : report.rows) {
        if (!row.score) err << row.file << ": " << row.error << "\n";
    }
    const auto csv = judge::report_to_csv(report);
    if (a.out.empty() || a.out == "-") {
        out << csv;
    } else {
        write_file(a.out, csv);
    }
    if (!a.json.empty()) write_file(a.json, judge::report_to_json(report).dump(2) + "\n");
    return kExitOk;
}

int cmd_csuq(const JudgeArgs& a, std::ostream& out) {
    judge::CsuqResponse response;
    judge::CsuqMapping mapping = judge::default_csuq_mapping();
    try {
        response = judge::csuq_response_from_json(read_json_file(a.csuq_in));
        if (!a.mapping.empty()) mapping = judge::csuq_mapping_from_json(read_json_file(a.mapping));
        out << judge::format_csuq(judge::score_csuq(response, mapping)) << "\n";
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return kExitOk;
}

std::atomic<ReviewService*> g_serving{nullptr};

extern "C" void on_signal(int) {
    if (auto* s = g_serving.load()) s->stop();
}

struct ServeArgs {
    std::string host = "127.0.0.1";
    int port = 8765;
    std::string store;
    std::string mock;
    std::string provider;
    std::string ui_dir;
};

int cmd_serve(const ServeArgs& a, std::ostream& err) {
    ServiceOptions options;
    options.store_root = a.store;
    options.gateways = gateway_factory(a.mock, a.provider);
    if (!a.ui_dir.empty()) options.ui_dir = a.ui_dir;
    if (const char* token = std::getenv("REQFORGE_TOKEN")) options.token = token;
    ReviewService service(std::move(options));
    for (const auto& e : service.load_errors()) err << "skipped session " << e << "\n";
    err << "serving " << a.store << " on http://" << a.host << ":" << a.port << "\n";
    // stop() from a signal handler is not strictly async-signal-safe; acceptable for an operator tool.
    g_serving = &service;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    const bool ok = service.listen(a.host, a.port);
    g_serving = nullptr;
    if (!ok) {
        err << "cannot listen on " << a.host << ":" << a.port << "\n";
        return kExitFailed;
    }
    return kExitOk;
}

int cmd_status(const std::string& store_dir, const std::string& id, std::ostream& out) {
    pipeline::SessionStore store(store_dir);
    if (!id.empty()) {
        try {
            out << pipeline::session_to_json(store.load(id)).dump(2) << "\n";
        } catch (const pipeline::SessionNotFound& e) {
            throw UsageError(e.what());
        }
        return kExitOk;
    }
    for (const auto& sid : store.list_ids()) {
        try {
            const auto s = summarize(store.load(sid));
            out << s.id << "  " << pipeline::to_string(s.status) << "  " << pipeline::to_string(s.current_stage) << "  "
                << to_string(s.prompt_kind) << "  " << s.stage_count << " artifacts\n";
        } catch (const std::exception& e) {
            out << sid << "  unreadable: " << e.what() << "\n";
        }
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Refines prompts through interview, specification, task planning and review stages", "reqforge"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Refine one prompt");
    run_cmd->add_option("--kind", run.kind, "user or system")->required();
    run_cmd->add_option("--input", run.input, "Prompt file, or - for stdin")->required();
    run_cmd->add_option("--gate", run.gate, "auto, interactive or serve")->required();
    run_cmd->add_option("--skip", run.skip, "Stage to skip (repeatable)");
    run_cmd->add_option("--question-budget", run.question_budget, "Questions per interview step")->check(CLI::Range(1, 10));
    run_cmd->add_option("--refine", run.refine, "Critic/regenerate rounds")->check(CLI::Range(0, 3));
    run_cmd->add_option("--template-marker", run.template_marker, "Marker that starts the fixed output template");
    auto* provider_opt = run_cmd->add_option("--provider", run.provider, "openai, qwen or anthropic");
    auto* mock_opt = run_cmd->add_option("--mock", run.mock, "Scripted transcript instead of a provider");
    mock_opt->excludes(provider_opt);
    run_cmd->add_option("--out", run.out, "Write the final prompt here instead of stdout");
    run_cmd->add_option("--store", run.store, "Session store directory");
    run_cmd->add_option("--host", run.host, "Bind address for --gate serve");
    run_cmd->add_option("--port", run.port, "Port for --gate serve");
    run_cmd->add_option("--session-id", run.session_id, "Explicit session id");
    run_cmd->add_flag("--user-guidance", run.user_guidance, "Add the optional user guidance interview step");

    JudgeArgs jd;
    auto* judge_cmd = app.add_subcommand("judge", "Score PRD/SDD documents, or CSUQ responses");
    judge_cmd->require_subcommand(0, 1);
    judge_cmd->add_option("--kind", jd.kind, "prd or sdd");
    judge_cmd->add_option("--in", jd.in, "Directory of documents");
    judge_cmd->add_option("--out", jd.out, "CSV report path (stdout when absent)");
    judge_cmd->add_option("--json", jd.json, "Also write the JSON report here");
    auto* judge_provider = judge_cmd->add_option("--provider", jd.provider, "openai, qwen or anthropic");
    judge_cmd->add_option("--mock", jd.mock, "Scripted transcript instead of a provider")->excludes(judge_provider);
    auto* csuq_cmd = judge_cmd->add_subcommand("csuq", "Score a CSUQ questionnaire response");
    csuq_cmd->add_option("--in", jd.csuq_in, "JSON array of 19 integers")->required();
    csuq_cmd->add_option("--mapping", jd.mapping, "Subscale mapping JSON");

    ServeArgs sv;
    auto* serve_cmd = app.add_subcommand("serve", "Run the review service");
    serve_cmd->add_option("--port", sv.port, "Port");
    serve_cmd->add_option("--host", sv.host, "Bind address");
    serve_cmd->add_option("--store", sv.store, "Session store directory")->required();
    auto* serve_provider = serve_cmd->add_option("--provider", sv.provider, "openai, qwen or anthropic");
    serve_cmd->add_option("--mock", sv.mock, "Scripted transcript for every new session")->excludes(serve_provider);
    serve_cmd->add_option("--ui-dir", sv.ui_dir, "Static files served under /ui");

    std::string status_store, status_id;
    auto* status_cmd = app.add_subcommand("status", "List stored sessions or print one");
    status_cmd->add_option("--store", status_store, "Session store directory")->required();
    status_cmd->add_option("--id", status_id, "Session id");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*run_cmd) return cmd_run(run, in, out, err);
        if (*csuq_cmd) return cmd_csuq(jd, out);
        if (*judge_cmd) return cmd_judge(jd, out, err);
        if (*serve_cmd) return cmd_serve(sv, err);
        if (*status_cmd) return cmd_status(status_store, status_id, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailed;
    }
    return kExitUsage;
}

}  // namespace reqforge::interface
