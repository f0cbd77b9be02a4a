#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reqforge/agents/interview.hpp"
#include "reqforge/common/time.hpp"
#include "reqforge/cot/critique.hpp"
#include "reqforge/llm/gateway.hpp"
#include "reqforge/llm/transcript.hpp"

namespace reqforge::testing {

inline std::filesystem::path fixture_path(const std::string& rel) {
    return std::filesystem::path(REQFORGE_FIXTURES_DIR) / rel;
}

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& s) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << s;
}

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("reqforge-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Clock that advances one second per call, so timestamps are distinct but reproducible.
inline Clock step_clock(std::int64_t start_s = 1'790'000'000) {
    auto t = std::make_shared<std::int64_t>(start_s * 1000);
    return [t] {
        *t += 1000;
        return Timestamp(std::chrono::milliseconds(*t));
    };
}

inline std::string fenced(const nlohmann::json& j) { return "```json\n" + j.dump(2) + "\n```"; }

inline nlohmann::json task_json(const std::string& id, const std::string& category, std::vector<std::string> deps = {}) {
    return {{"id", id}, {"title", "Task " + id}, {"description", "Do " + id}, {"depends_on", deps}, {"category", category}};
}

inline nlohmann::json simple_tasks() {
    return {{"tasks", {task_json("E", "entry", {"C"}), task_json("C", "code", {"V"}), task_json("V", "env"), task_json("D", "docs")}}};
}

inline nlohmann::json system_draft_json() {
    return {{"role_definition", "You are a reviewer."},
            {"knowledge", "Style guide."},
            {"tools", "None."},
            {"context", "Team of four."},
            {"work_modes", {{{"name", "Review"}, {"conduct", "Be precise."}, {"examples", {"Line 3: typo"}}}}}};
}

inline nlohmann::json critique_json(const std::vector<std::string>& parts, int score = 4,
                                    const std::string& feedback = "Tighten the entry task.") {
    nlohmann::json aspects = nlohmann::json::object();
    for (auto a : cot::kAllAspects) aspects[std::string(cot::aspect_key(a))] = "fine";
    nlohmann::json scores = nlohmann::json::object();
    for (const auto& p : parts) scores[p] = score;
    return {{"aspects", aspects},
            {"summary", {{"strengths", "clear"}, {"weaknesses", "thin"}}},
            {"part_scores", scores},
            {"feedback", feedback}};
}

inline const std::vector<std::string>& step_keys() {
    static const std::vector<std::string> keys = {"components", "core_functions", "enhancements_and_scope", "front_end",
                                                  "user_guidance"};
    return keys;
}

/// Builds scripted transcripts in request order.
class Script {
public:
    Script& raw(std::string match, std::string response) {
        t_.entries.push_back({std::move(match), std::move(response)});
        return *this;
    }
    Script& question(const std::string& step, const std::string& text = "What is needed?") {
        return raw("[request:interviewer.question step=" + step + "]",
                   fenced({{"status", "question"}, {"question", text}, {"purpose", "Understand " + step}}));
    }
    Script& step_complete(const std::string& step) {
        return raw("[request:interviewer.question step=" + step + "]", fenced({{"status", "step_complete"}}));
    }
    Script& answer(const std::string& step, std::vector<std::string> lines = {"[overall] The game shall run in a browser"}) {
        return raw("[request:interviewee.answer step=" + step + "]", fenced({{"requirements", lines}}));
    }
    /// `per_step` question/answer pairs per step. Pass `close` when per_step is below the budget,
    /// since the Interviewer is then asked once more and closes the step itself.
    Script& interview(int per_step = 1, int steps = 4, bool close = false) {
        for (int s = 0; s < steps; ++s) {
            for (int q = 0; q < per_step; ++q) question(step_keys()[s]).answer(step_keys()[s]);
            if (close) step_complete(step_keys()[s]);
        }
        return *this;
    }
    Script& srs(int turns) {
        nlohmann::json ids = nlohmann::json::array();
        for (int i = 1; i <= turns; ++i) ids.push_back(i);
        return raw("[request:interviewer.srs]",
                   fenced({{"sections", {{{"heading", "Purpose"}, {"body", "A game."}, {"source_turns", ids}}}}}));
    }
    Script& tasks(const nlohmann::json& j = simple_tasks()) { return raw("[request:coter.task_list]", fenced(j)); }
    Script& system_draft(const nlohmann::json& j = system_draft_json()) {
        return raw("[request:coter.system_prompt]", fenced(j));
    }
    Script& critique(const std::vector<std::string>& parts, int score = 4) {
        return raw("[request:critic.review]", fenced(critique_json(parts, score)));
    }
    /// Complete user-prompt run: interview, SRS, tasks, critique, regenerated tasks, critique.
    Script& full_user(int per_step = 1) {
        interview(per_step).srs(4 * per_step).tasks().critique({"D", "V", "C", "E"}).tasks().critique({"D", "V", "C", "E"});
        return *this;
    }
    llm::ScriptedTranscript build() const { return t_; }
    std::shared_ptr<llm::Gateway> gateway() const { return llm::make_mock_gateway(t_); }

private:
    llm::ScriptedTranscript t_;
};

/// Answers any agent request from its tag, optionally replying with garbage at a seeded rate.
class RuleBackend : public llm::ChatBackend {
public:
    explicit RuleBackend(double garbage_rate = 0.0, unsigned seed = 1) : rate_(garbage_rate), rng_(seed) {}

    std::string name() const override { return "rules"; }

    llm::ChatResponse send(const llm::ChatRequest& request) override {
        std::lock_guard lock(m_);
        ++calls_;
        llm::ChatResponse r;
        const std::string& user = request.messages.back().content;
        if (rate_ > 0 && std::uniform_real_distribution<>(0, 1)(rng_) < rate_) {
            r.content = "Sorry, no structured reply this time.";
            return r;
        }
        r.content = reply(user);
        return r;
    }

    int calls() const {
        std::lock_guard lock(m_);
        return calls_;
    }

private:
    static std::string reply(const std::string& user) {
        if (user.starts_with("[request:interviewer.question")) {
            return fenced({{"status", "question"}, {"question", "Which parts?"}, {"purpose", "Scope the system."}});
        }
        if (user.starts_with("[request:interviewee.answer")) {
            return fenced({{"requirements", {"[component] The board shall have 16 cells"}}});
        }
        if (user.starts_with("[request:interviewer.srs]")) {
            nlohmann::json ids = nlohmann::json::array();
            static const std::regex turn(R"(\nTurn (\d+) \[)");
            for (std::sregex_iterator it(user.begin(), user.end(), turn), end; it != end; ++it) {
                ids.push_back(std::stoi((*it)[1]));
            }
            return fenced({{"sections", {{{"heading", "Purpose"}, {"body", "Game."}, {"source_turns", ids}}}}});
        }
        if (user.starts_with("[request:coter.task_list]")) return fenced(simple_tasks());
        if (user.starts_with("[request:coter.system_prompt]")) return fenced(system_draft_json());
        if (user.starts_with("[request:critic.review]")) {
            static const std::regex parts(R"(Score exactly these parts: ([^\n]*))");
            std::smatch m;
            std::vector<std::string> ids;
            if (std::regex_search(user, m, parts)) {
                std::string list = m[1];
                std::size_t pos = 0;
                while (pos <= list.size()) {
                    auto end = list.find(", ", pos);
                    if (end == std::string::npos) end = list.size();
                    ids.push_back(list.substr(pos, end - pos));
                    pos = end + 2;
                }
            }
            return fenced(critique_json(ids));
        }
        return "unrecognised request";
    }

    double rate_;
    mutable std::mutex m_;
    std::mt19937 rng_;
    int calls_ = 0;
};

inline std::shared_ptr<llm::Gateway> rule_gateway(double garbage_rate = 0.0, unsigned seed = 1) {
    llm::ProviderConfig config;
    config.provider = "mock";
    config.model = "rules";
    config.retry_backoff_ms = 0;
    return std::make_shared<llm::Gateway>(config, std::make_shared<RuleBackend>(garbage_rate, seed));
}

}  // namespace reqforge::testing
