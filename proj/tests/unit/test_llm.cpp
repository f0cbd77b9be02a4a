#include <gtest/gtest.h>
#include <httplib.h>

#include <cstdlib>
#include <random>
#include <thread>

#include "reqforge/llm/extract.hpp"
#include "reqforge/llm/http_backend.hpp"
#include "reqforge/llm/transcript.hpp"
#include "support.hpp"

using namespace reqforge;
using namespace reqforge::llm;
using reqforge::testing::fenced;

namespace {

ChatRequest user_request(const std::string& text) {
    ChatRequest r;
    r.messages.push_back({Role::User, text});
    return r;
}

ScriptedTranscript transcript(std::vector<TranscriptEntry> entries) { return ScriptedTranscript{std::move(entries), 0}; }

}  // namespace

TEST(Complete, WildcardReplyIsReturnedVerbatim) {
    auto gw = make_mock_gateway(transcript({{"*", "OK"}}));
    EXPECT_EQ(gw->complete(user_request("anything")).content, "OK");
}

TEST(Complete, ExhaustedTranscriptIsAnError) {
    auto gw = make_mock_gateway(transcript({}));
    try {
        gw->complete(user_request("x"));
        FAIL();
    } catch (const GatewayError& e) {
        EXPECT_EQ(e.kind(), GatewayError::Kind::TranscriptExhausted);
        EXPECT_FALSE(e.retryable());
    }
}

TEST(Complete, OmittedTemperatureResolvesToZero) {
    auto gw = make_mock_gateway(transcript({{"*", "OK"}}));
    const auto r = gw->complete(user_request("x"));
    EXPECT_EQ(r.provider_meta.at("temperature"), "0");
    EXPECT_EQ(r.provider_meta.at("max_tokens"), "4096");
}

TEST(Complete, DoesNotMutateTheRequest) {
    auto gw = make_mock_gateway(transcript({{"*", "OK"}}));
    const auto req = user_request("x");
    const auto copy = req;
    gw->complete(req);
    EXPECT_EQ(req, copy);
    EXPECT_FALSE(req.temperature.has_value());
}

TEST(Complete, ResolveKeepsExplicitSettings) {
    auto gw = make_mock_gateway(transcript({}));
    auto req = user_request("x");
    req.temperature = 0.7;
    req.max_tokens = 10;
    const auto r = gw->resolve(req);
    EXPECT_DOUBLE_EQ(*r.temperature, 0.7);
    EXPECT_EQ(*r.max_tokens, 10);
}

TEST(Complete, EmptyRequestIsRejected) {
    auto gw = make_mock_gateway(transcript({{"*", "OK"}}));
    EXPECT_THROW(gw->complete(ChatRequest{}), GatewayError);
}

namespace {

class FlakyBackend : public ChatBackend {
public:
    explicit FlakyBackend(int failures) : failures_(failures) {}
    std::string name() const override { return "flaky"; }
    ChatResponse send(const ChatRequest&) override {
        ++calls;
        if (failures_-- > 0) throw GatewayError(GatewayError::Kind::Transport, "reset");
        ChatResponse r;
        r.content = "fine";
        return r;
    }
    int calls = 0;

private:
    int failures_;
};

}  // namespace

TEST(Complete, TransportFailuresAreRetriedTwiceByDefault) {
    ProviderConfig cfg;
    cfg.provider = "mock";
    auto backend = std::make_shared<FlakyBackend>(2);
    Gateway gw(cfg, backend);
    std::vector<std::chrono::milliseconds> sleeps;
    gw.set_sleeper([&](auto d) { sleeps.push_back(d); });
    EXPECT_EQ(gw.complete(user_request("x")).content, "fine");
    EXPECT_EQ(backend->calls, 3);
    EXPECT_EQ(sleeps.size(), 2u);
    EXPECT_EQ(sleeps[0].count(), 1000);

    auto worse = std::make_shared<FlakyBackend>(3);
    Gateway gw2(cfg, worse);
    gw2.set_sleeper([](auto) {});
    EXPECT_THROW(gw2.complete(user_request("x")), GatewayError);
    EXPECT_EQ(worse->calls, 3);
}

TEST(Replay, MatchingHintAdvancesCursor) {
    auto t = transcript({{"interview", "Q1-text"}});
    EXPECT_EQ(replay(t, user_request("the interview begins")).content, "Q1-text");
    EXPECT_EQ(t.cursor, 1u);
}

TEST(Replay, MissingHintIsAMismatchAndCursorStays) {
    auto t = transcript({{"interview", "Q1-text"}});
    try {
        replay(t, user_request("hello there"));
        FAIL();
    } catch (const GatewayError& e) {
        EXPECT_EQ(e.kind(), GatewayError::Kind::TranscriptMismatch);
        EXPECT_NE(std::string(e.what()).find("interview"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("hello there"), std::string::npos);
    }
    EXPECT_EQ(t.cursor, 0u);
}

TEST(Replay, EntriesComeBackInDeclarationOrder) {
    auto t = transcript({{"*", "first"}, {"*", "second"}});
    EXPECT_EQ(replay(t, user_request("a")).content, "first");
    EXPECT_EQ(replay(t, user_request("a")).content, "second");
    EXPECT_TRUE(t.exhausted());
}

TEST(Replay, TranscriptJsonRoundTrip) {
    auto t = transcript({{"a", "b"}, {"*", "c"}});
    EXPECT_EQ(transcript_from_json(transcript_to_json(t)).entries, t.entries);
}

TEST(ReplayProperty, DeterministicAcrossRuns) {
    std::mt19937 rng(42);
    for (int round = 0; round < 50; ++round) {
        ScriptedTranscript t;
        const int n = 1 + static_cast<int>(rng() % 10);
        std::vector<ChatRequest> requests;
        for (int i = 0; i < n; ++i) {
            t.entries.push_back({"*", "reply " + std::to_string(rng())});
            requests.push_back(user_request("req " + std::to_string(rng())));
        }
        auto run = [&] {
            auto gw = make_mock_gateway(t);
            std::vector<ChatResponse> out;
            for (const auto& r : requests) out.push_back(gw->complete(r));
            return out;
        };
        EXPECT_EQ(run(), run());
    }
}

TEST(Extract, SingleFencedTaskList) {
    ChatResponse r;
    r.content = "Plan:\n" + fenced(reqforge::testing::simple_tasks());
    auto p = extract_structured(r, Schema::TaskList);
    ASSERT_TRUE(ok(p));
    const auto& list = std::get<cot::TaskList>(std::get<StructuredPayload>(p));
    EXPECT_EQ(list.tasks.size(), 4u);
    EXPECT_EQ(list.tasks[0].id, "E");  // reply order kept
}

TEST(Extract, NoJsonIsNoParseableBlock) {
    ChatResponse r;
    r.content = "no json here";
    auto p = extract_structured(r, Schema::TaskList);
    ASSERT_FALSE(ok(p));
    EXPECT_EQ(std::get<ParseFailure>(p).rule, "no-parseable-block");
}

TEST(Extract, SecondBlockUsedWhenFirstIsInvalid) {
    ChatResponse r;
    r.content = "```json\n{\"tasks\": 3}\n```\nfixed:\n" + fenced(reqforge::testing::simple_tasks());
    auto p = extract_structured(r, Schema::TaskList);
    ASSERT_TRUE(ok(p));
    EXPECT_EQ(std::get<cot::TaskList>(std::get<StructuredPayload>(p)).tasks.size(), 4u);
}

TEST(Extract, SchemaViolationCarriesSpanAndRule) {
    ChatResponse r;
    r.content = "prefix ```json\n{\"tasks\": []}\n```";
    auto p = extract_structured(r, Schema::TaskList);
    ASSERT_FALSE(ok(p));
    const auto& f = std::get<ParseFailure>(p);
    EXPECT_EQ(f.rule, "schema");
    EXPECT_EQ(r.content.substr(f.span.offset, f.span.length), "{\"tasks\": []}\n");
}

TEST(Extract, WholeMessageJsonWithoutFence) {
    ChatResponse r;
    r.content = reqforge::testing::system_draft_json().dump();
    EXPECT_TRUE(ok(extract_structured(r, Schema::SystemPromptDraft)));
}

TEST(Extract, TruncatedReplyIsRejected) {
    ChatResponse r;
    r.content = fenced(reqforge::testing::simple_tasks());
    r.finish_reason = FinishReason::Length;
    auto p = extract_structured(r, Schema::TaskList);
    ASSERT_FALSE(ok(p));
    EXPECT_EQ(std::get<ParseFailure>(p).rule, "finish-reason");
}

TEST(Extract, EverySchemaHasAName) {
    for (auto s : {Schema::TaskList, Schema::SystemPromptDraft, Schema::CritiqueReport, Schema::RequirementBatch,
                   Schema::DocScoreReply, Schema::InterviewTurnReply, Schema::SrsSections}) {
        EXPECT_FALSE(to_string(s).empty());
    }
}

TEST(ExtractProperty, NeverThrowsOnArbitraryText) {
    std::mt19937 rng(7);
    const std::string alphabet = "{}[]\":,`json \n\tabc123-tasksidcategory\\";
    const Schema schemas[] = {Schema::TaskList, Schema::SystemPromptDraft, Schema::CritiqueReport, Schema::RequirementBatch,
                              Schema::DocScoreReply, Schema::InterviewTurnReply, Schema::SrsSections};
    for (int i = 0; i < 2000; ++i) {
        ChatResponse r;
        const int len = static_cast<int>(rng() % 120);
        for (int k = 0; k < len; ++k) r.content += alphabet[rng() % alphabet.size()];
        if (i % 5 == 0) r.content = "```json\n" + r.content + "\n```";
        for (auto s : schemas) EXPECT_NO_THROW(extract_structured(r, s));
    }
}

TEST(ExtractProperty, DefaultsOnEveryBuiltRequest) {
    auto gw = make_mock_gateway(transcript({}));
    std::mt19937 rng(3);
    for (int i = 0; i < 100; ++i) {
        auto r = gw->resolve(user_request(std::to_string(rng())));
        EXPECT_EQ(*r.temperature, 0.0);
        EXPECT_EQ(*r.max_tokens, 4096);
    }
}

TEST(Providers, PresetsAndUnknownNames) {
    EXPECT_EQ(provider_preset("openai").api_key_env_var, "OPENAI_API_KEY");
    EXPECT_EQ(provider_preset("qwen").provider, "qwen");
    EXPECT_EQ(provider_preset("anthropic").provider, "anthropic");
    try {
        provider_preset("nope");
        FAIL();
    } catch (const GatewayError& e) {
        EXPECT_EQ(e.kind(), GatewayError::Kind::Config);
    }
}

class HttpBackendTest : public ::testing::Test {
protected:
    void SetUp() override {
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        setenv("REQFORGE_TEST_KEY", "secret", 1);
    }
    void TearDown() override {
        server_.stop();
        thread_.join();
    }
    ProviderConfig config(const std::string& provider, const std::string& path) {
        auto c = provider_preset(provider);
        c.endpoint_url = "http://127.0.0.1:" + std::to_string(port_) + path;
        c.api_key_env_var = "REQFORGE_TEST_KEY";
        c.retry_backoff_ms = 0;
        c.transport_timeout_s = 5;
        return c;
    }
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
};

TEST_F(HttpBackendTest, OpenAiWireFormat) {
    nlohmann::json seen;
    std::string auth;
    server_.Post("/v1/chat", [&](const httplib::Request& req, httplib::Response& res) {
        seen = nlohmann::json::parse(req.body);
        auth = req.get_header_value("Authorization");
        res.set_content(R"({"id":"r1","choices":[{"message":{"content":"hi"},"finish_reason":"stop"}]})", "application/json");
    });
    auto gw = make_http_gateway(config("openai", "/v1/chat"));
    ChatRequest req;
    req.messages = {{Role::System, "sys"}, {Role::User, "hello"}};
    const auto r = gw->complete(req);
    EXPECT_EQ(r.content, "hi");
    EXPECT_EQ(r.finish_reason, FinishReason::Stop);
    EXPECT_EQ(auth, "Bearer secret");
    EXPECT_EQ(seen["temperature"], 0.0);
    EXPECT_EQ(seen["max_tokens"], 4096);
    EXPECT_EQ(seen["messages"][0]["role"], "system");
    EXPECT_EQ(seen["messages"][1]["content"], "hello");
}

TEST_F(HttpBackendTest, AnthropicWireFormat) {
    nlohmann::json seen;
    std::string key;
    server_.Post("/v1/messages", [&](const httplib::Request& req, httplib::Response& res) {
        seen = nlohmann::json::parse(req.body);
        key = req.get_header_value("x-api-key");
        res.set_content(R"({"id":"m1","content":[{"type":"text","text":"yo"}],"stop_reason":"end_turn"})", "application/json");
    });
    auto gw = make_http_gateway(config("anthropic", "/v1/messages"));
    ChatRequest req;
    req.messages = {{Role::System, "sys"}, {Role::User, "hello"}};
    EXPECT_EQ(gw->complete(req).content, "yo");
    EXPECT_EQ(key, "secret");
    EXPECT_EQ(seen["system"], "sys");
    EXPECT_EQ(seen["messages"].size(), 1u);
}

TEST_F(HttpBackendTest, NonSuccessStatusCarriesStatusAndBody) {
    server_.Post("/v1/chat", [](const httplib::Request&, httplib::Response& res) {
        res.status = 429;
        res.set_content("slow down please", "text/plain");
    });
    auto gw = make_http_gateway(config("openai", "/v1/chat"));
    try {
        gw->complete(user_request("x"));
        FAIL();
    } catch (const GatewayError& e) {
        EXPECT_EQ(e.kind(), GatewayError::Kind::Provider);
        EXPECT_EQ(e.status(), 429);
        EXPECT_NE(e.body_excerpt().find("slow down"), std::string::npos);
    }
}

TEST_F(HttpBackendTest, UnreachableEndpointIsRetryableTransportError) {
    auto c = config("openai", "/v1/chat");
    c.endpoint_url = "http://127.0.0.1:1/v1/chat";
    auto gw = make_http_gateway(c);
    gw->set_sleeper([](auto) {});
    try {
        gw->complete(user_request("x"));
        FAIL();
    } catch (const GatewayError& e) {
        EXPECT_EQ(e.kind(), GatewayError::Kind::Transport);
        EXPECT_TRUE(e.retryable());
    }
}

TEST_F(HttpBackendTest, MissingKeyIsAConfigError) {
    auto c = config("openai", "/v1/chat");
    c.api_key_env_var = "REQFORGE_TEST_KEY_UNSET";
    unsetenv("REQFORGE_TEST_KEY_UNSET");
    auto gw = make_http_gateway(c);
    try {
        gw->complete(user_request("x"));
        FAIL();
    } catch (const GatewayError& e) {
        EXPECT_EQ(e.kind(), GatewayError::Kind::Config);
    }
}
