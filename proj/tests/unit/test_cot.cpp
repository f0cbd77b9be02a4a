#include <gtest/gtest.h>

#include <random>

#include "dag.hpp"
#include "reqforge/agents/context.hpp"
#include "reqforge/cot/chain.hpp"
#include "reqforge/cot/critique.hpp"
#include "reqforge/cot/generate.hpp"
#include "reqforge/cot/system_prompt.hpp"
#include "reqforge/cot/template.hpp"
#include "support.hpp"

using namespace reqforge;
using namespace reqforge::cot;
using reqforge::testing::fenced;
using reqforge::testing::Script;

namespace {

Task t(std::string id, TaskCategory c, std::vector<std::string> deps = {}) {
    return Task{id, "title " + id, "desc " + id, std::move(deps), c};
}

std::vector<std::string> ids(const TaskList& l) {
    std::vector<std::string> out;
    for (const auto& x : l.tasks) out.push_back(x.id);
    return out;
}

std::vector<std::string> rules(const ValidationReport& r) {
    std::vector<std::string> out;
    for (const auto& v : r.violations) out.push_back(v.rule);
    return out;
}

SystemPromptDraft draft() {
    SystemPromptDraft d;
    d.role_definition = "You are a reviewer.";
    d.knowledge = "Style guide.";
    d.tools = "None.";
    d.context_info = "Team of four.";
    d.work_modes = {{"Review", "Be precise.", {"Line 3: typo"}}, {"Clarify", "Ask one question.", {"Why?"}}};
    return d;
}

agents::SrsDraft srs() { return agents::SrsDraft{{{"Purpose", "A game.", {1}}}}; }

agents::ScenarioContext ctx(PromptKind kind = PromptKind::UserPrompt) {
    return agents::default_context(kind, "I want a 2048 game");
}

}  // namespace

TEST(OrderTasks, UniqueValidOrder) {
    auto out = order_tasks({t("E", TaskCategory::Entry, {"C"}), t("C", TaskCategory::Code, {"V"}), t("V", TaskCategory::Env),
                            t("D", TaskCategory::Docs)});
    EXPECT_EQ(ids(out), (std::vector<std::string>{"D", "V", "C", "E"}));
}

TEST(OrderTasks, IdTieBreak) {
    auto out = order_tasks({t("E", TaskCategory::Entry), t("D2", TaskCategory::Docs), t("D1", TaskCategory::Docs)});
    EXPECT_EQ(ids(out), (std::vector<std::string>{"D1", "D2", "E"}));
}

TEST(OrderTasks, TwoCycleIsNamed) {
    try {
        order_tasks({t("A", TaskCategory::Code, {"B"}), t("B", TaskCategory::Code, {"A"}), t("E", TaskCategory::Entry)});
        FAIL();
    } catch (const TaskGraphError& e) {
        EXPECT_EQ(e.kind(), TaskGraphError::Kind::Cycle);
        EXPECT_EQ(e.rule(), "cycle");
        std::set<std::string> members(e.task_ids().begin(), e.task_ids().end());
        EXPECT_EQ(members, (std::set<std::string>{"A", "B"}));
        EXPECT_NE(std::string(e.what()).find("A -> B -> A"), std::string::npos);
    }
}

TEST(OrderTasks, StructuralErrors) {
    auto rule_of = [](std::vector<Task> tasks) {
        try {
            order_tasks(std::move(tasks));
        } catch (const TaskGraphError& e) {
            EXPECT_EQ(e.kind(), TaskGraphError::Kind::Structure);
            return e.rule();
        }
        return std::string("none");
    };
    EXPECT_EQ(rule_of({t("C", TaskCategory::Code)}), "entry-count");
    EXPECT_EQ(rule_of({t("E1", TaskCategory::Entry), t("E2", TaskCategory::Entry)}), "entry-count");
    EXPECT_EQ(rule_of({t("E", TaskCategory::Entry), t("C", TaskCategory::Code, {"E"})}), "entry-has-dependents");
    EXPECT_EQ(rule_of({t("E", TaskCategory::Entry), t("C", TaskCategory::Code, {"X"})}), "unknown-dependency");
    EXPECT_EQ(rule_of({t("E", TaskCategory::Entry), t("E", TaskCategory::Code)}), "duplicate-id");
    EXPECT_EQ(rule_of({t("E", TaskCategory::Entry), t("C", TaskCategory::Code), t("V", TaskCategory::Env, {"C"})}),
              "setup-depends-on-code");
}

TEST(Validate, OrderedOutputIsOk) {
    auto out = order_tasks({t("E", TaskCategory::Entry, {"C"}), t("C", TaskCategory::Code), t("D", TaskCategory::Docs)});
    EXPECT_TRUE(validate_task_list(out).ok);
}

TEST(Validate, EntryNotLast) {
    TaskList l{{t("E", TaskCategory::Entry), t("C", TaskCategory::Code)}};
    const auto r = validate_task_list(l);
    EXPECT_FALSE(r.ok);
    ASSERT_FALSE(r.violations.empty());
    EXPECT_EQ(rules(r), std::vector<std::string>{"entry-not-last"});
    EXPECT_EQ(r.violations[0].task_ids, std::vector<std::string>{"E"});
}

TEST(Validate, CodeBeforeEnv) {
    TaskList l{{t("C", TaskCategory::Code), t("V", TaskCategory::Env), t("E", TaskCategory::Entry)}};
    const auto r = validate_task_list(l);
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(rules(r), std::vector<std::string>{"setup-after-code"});
}

TEST(Validate, DependencyOrderAndEmptyList) {
    TaskList l{{t("C", TaskCategory::Code, {"B"}), t("B", TaskCategory::Code), t("E", TaskCategory::Entry)}};
    EXPECT_EQ(rules(validate_task_list(l)), std::vector<std::string>{"dependency-order"});
    EXPECT_FALSE(validate_task_list(TaskList{}).ok);
}

TEST(OrderProperty, MatchesReferenceOnRandomDags) {
    std::mt19937 rng(2024);
    for (int i = 0; i < 1000; ++i) {
        const auto tasks = reqforge::testing::random_dag(rng);
        const auto out = order_tasks(tasks);
        const auto problems = reqforge::testing::order_problems(tasks, out);
        ASSERT_TRUE(problems.empty()) << problems.front();
        ASSERT_TRUE(validate_task_list(out).ok);
    }
}

TEST(OrderProperty, PermutationInvariant) {
    std::mt19937 rng(99);
    for (int i = 0; i < 300; ++i) {
        auto tasks = reqforge::testing::random_dag(rng);
        const auto first = order_tasks(tasks);
        for (int k = 0; k < 3; ++k) {
            std::shuffle(tasks.begin(), tasks.end(), rng);
            ASSERT_EQ(order_tasks(tasks), first);
        }
    }
}

TEST(OrderProperty, RandomBackEdgeYieldsCycle) {
    std::mt19937 rng(17);
    int cycles = 0;
    for (int i = 0; i < 300; ++i) {
        auto tasks = reqforge::testing::random_dag(rng);
        // Pick a code task with a code dependency and make the dependency point back.
        for (auto& x : tasks) {
            if (x.category != TaskCategory::Code) continue;
            auto dep = std::find_if(tasks.begin(), tasks.end(), [&](const Task& y) {
                return y.category == TaskCategory::Code &&
                       std::find(x.depends_on.begin(), x.depends_on.end(), y.id) != x.depends_on.end();
            });
            if (dep == tasks.end()) continue;
            dep->depends_on.push_back(x.id);
            try {
                order_tasks(tasks);
                ADD_FAILURE() << "cycle not detected";
            } catch (const TaskGraphError& e) {
                EXPECT_EQ(e.kind(), TaskGraphError::Kind::Cycle);
                ++cycles;
            }
            break;
        }
    }
    EXPECT_GT(cycles, 20);
}

TEST(TaskListJson, ParseKeepsReplyOrderAndRejectsBadFields) {
    auto p = parse_task_list(reqforge::testing::simple_tasks());
    ASSERT_TRUE(llm::ok(p));
    EXPECT_EQ(ids(std::get<TaskList>(p)), (std::vector<std::string>{"E", "C", "V", "D"}));
    auto bad = reqforge::testing::simple_tasks();
    bad["tasks"][0]["category"] = "test";
    EXPECT_FALSE(llm::ok(parse_task_list(bad)));
    auto dangling = reqforge::testing::simple_tasks();
    dangling["tasks"][0]["depends_on"] = {"nope"};
    EXPECT_EQ(std::get<llm::ParseFailure>(parse_task_list(dangling)).rule, "unknown-dependency");
}

TEST(TaskListJson, RoundTrip) {
    std::mt19937 rng(4);
    for (int i = 0; i < 100; ++i) {
        const auto list = order_tasks(reqforge::testing::random_dag(rng));
        auto back = parse_task_list(task_list_to_json(list));
        ASSERT_TRUE(llm::ok(back));
        EXPECT_EQ(std::get<TaskList>(back), list);
    }
}

TEST(RenderUserPrompt, PreambleThenJsonBlock) {
    const auto list = order_tasks({t("E", TaskCategory::Entry), t("D", TaskCategory::Docs)});
    const auto out = render_user_prompt("  I want a 2048 game\n", list);
    EXPECT_TRUE(out.starts_with("Original request: \"I want a 2048 game\"."));
    const auto open = out.find("```json\n");
    ASSERT_NE(open, std::string::npos);
    const auto body = out.substr(open + 8, out.rfind("\n```") - open - 8);
    EXPECT_EQ(nlohmann::json::parse(body), task_list_to_json(list));
}

TEST(GenerateCot, UserModeRepairsOrder) {
    auto gw = Script().tasks().gateway();
    const auto chain = generate_cot(srs(), ctx(), std::nullopt, *gw);
    ASSERT_NE(chain.task_list(), nullptr);
    EXPECT_EQ(ids(*chain.task_list()), (std::vector<std::string>{"D", "V", "C", "E"}));
    EXPECT_TRUE(validate_task_list(*chain.task_list()).ok);
}

TEST(GenerateCot, CycleInReplyIsParseFailure) {
    nlohmann::json j = {{"tasks",
                         {reqforge::testing::task_json("A", "code", {"B"}), reqforge::testing::task_json("B", "code", {"A"}),
                          reqforge::testing::task_json("E", "entry")}}};
    auto gw = Script().tasks(j).gateway();
    try {
        generate_cot(srs(), ctx(), std::nullopt, *gw);
        FAIL();
    } catch (const llm::ParseError& e) {
        EXPECT_EQ(e.failure().rule, "cycle");
    }
}

TEST(GenerateCot, SystemModeMissingKnowledgeIsCompletenessFailure) {
    auto j = reqforge::testing::system_draft_json();
    j.erase("knowledge");
    auto gw = Script().system_draft(j).gateway();
    try {
        generate_cot(srs(), ctx(PromptKind::SystemPrompt), std::nullopt, *gw);
        FAIL();
    } catch (const llm::ParseError& e) {
        EXPECT_EQ(e.failure().rule, "completeness");
    }
}

TEST(GenerateCot, SystemModeProducesDraft) {
    auto gw = Script().system_draft().gateway();
    const auto chain = generate_cot(srs(), ctx(PromptKind::SystemPrompt), std::nullopt, *gw);
    ASSERT_NE(chain.system_prompt(), nullptr);
    EXPECT_EQ(chain.system_prompt()->knowledge, "Style guide.");
}

TEST(GenerateCot, FeedbackChangesRequestOnlyByTheBlock) {
    auto report = critique_from_json(reqforge::testing::critique_json({"D", "E"}, 3, "Split the entry task."));
    const auto without = build_cot_request(srs(), ctx(), std::nullopt, {});
    const auto with = build_cot_request(srs(), ctx(), report, {});
    ASSERT_EQ(without.messages.size(), with.messages.size());
    for (std::size_t i = 0; i + 1 < with.messages.size(); ++i) EXPECT_EQ(without.messages[i], with.messages[i]);
    EXPECT_EQ(with.messages.back().content, without.messages.back().content + critique_feedback_block(report));
    EXPECT_NE(critique_feedback_block(report).find("Split the entry task."), std::string::npos);
}

TEST(Assemble, EndsWithAttachedTemplate) {
    auto d = draft();
    d.attached_template = "T";
    const auto out = assemble_system_prompt(d);
    EXPECT_TRUE(out.ends_with("T"));
    EXPECT_FALSE(out.ends_with("\nT\n"));
}

TEST(Assemble, DeterministicAndOrdered) {
    const auto a = assemble_system_prompt(draft());
    EXPECT_EQ(a, assemble_system_prompt(draft()));
    std::size_t last = 0;
    for (auto h : kComponentHeadings) {
        const auto at = a.find("## " + std::string(h) + "\n");
        ASSERT_NE(at, std::string::npos) << h;
        EXPECT_GE(at, last);
        last = at;
    }
    const auto review = a.find("Review");
    const auto clarify = a.find("Clarify");
    ASSERT_NE(review, std::string::npos);
    ASSERT_NE(clarify, std::string::npos);
    EXPECT_LT(review, clarify);
}

TEST(Assemble, CompletenessRules) {
    EXPECT_TRUE(completeness_violations(draft()).empty());
    auto d = draft();
    d.tools = " ";
    EXPECT_FALSE(completeness_violations(d).empty());
    d = draft();
    d.work_modes.clear();
    EXPECT_FALSE(completeness_violations(d).empty());
}

TEST(AssembleProperty, RenderIsInjectiveOnComponents) {
    std::mt19937 rng(123);
    const std::string alphabet = "abc XYZ\n#:-.";
    auto text = [&] {
        std::string s = "x";
        const int n = static_cast<int>(rng() % 40);
        for (int i = 0; i < n; ++i) s += alphabet[rng() % alphabet.size()];
        return s;
    };
    for (int i = 0; i < 500; ++i) {
        SystemPromptDraft d;
        d.role_definition = text();
        d.knowledge = text();
        d.tools = text();
        d.context_info = text();
        const int modes = 1 + static_cast<int>(rng() % 3);
        for (int m = 0; m < modes; ++m) d.work_modes.push_back({"mode" + std::to_string(m), text(), {text()}});
        if (rng() % 2) d.attached_template = text();
        const auto parsed = parse_system_prompt(assemble_system_prompt(d), d.attached_template);
        ASSERT_TRUE(parsed.has_value());
        EXPECT_EQ(*parsed, component_bodies(d));
    }
}

TEST(SystemPromptJson, RoundTrip) {
    auto back = parse_system_prompt_draft(system_prompt_to_json(draft()));
    ASSERT_TRUE(llm::ok(back));
    EXPECT_EQ(std::get<SystemPromptDraft>(back), draft());
}

TEST(SplitTemplate, Examples) {
    EXPECT_EQ(split_template("abc<TEMPLATE>xyz", "<TEMPLATE>"), (TemplateSplit{"abc", "xyz"}));
    EXPECT_EQ(split_template("abc", "<TEMPLATE>"), (TemplateSplit{"abc", std::nullopt}));
    EXPECT_EQ(split_template("a<T>b<T>c", "<T>"), (TemplateSplit{"a", "b<T>c"}));
    EXPECT_EQ(split_template("abc", ""), (TemplateSplit{"abc", std::nullopt}));
}

TEST(SplitTemplateProperty, JoinInvertsSplit) {
    std::mt19937 rng(31);
    const std::string marker = "<TEMPLATE>";
    const std::vector<std::string> pieces = {"a", "b", "<", ">", "TEMPLATE", marker, "\n", " ", "\xc3\xa9"};
    for (int i = 0; i < 1000; ++i) {
        std::string p;
        const int n = static_cast<int>(rng() % 12);
        for (int k = 0; k < n; ++k) p += pieces[rng() % pieces.size()];
        const auto s = split_template(p, marker);
        EXPECT_EQ(join_template(s, marker), p);
        EXPECT_EQ(s.template_text.has_value(), p.find(marker) != std::string::npos);
        EXPECT_EQ(s.body.find(marker), std::string::npos);
    }
}

TEST(Critique, ParseRulesAndRoundTrip) {
    const auto j = reqforge::testing::critique_json({"D", "E"});
    auto p = parse_critique(j);
    ASSERT_TRUE(llm::ok(p));
    EXPECT_EQ(critique_from_json(critique_to_json(std::get<CritiqueReport>(p))), std::get<CritiqueReport>(p));
    auto no_aspect = j;
    no_aspect["aspects"].erase("Concise");
    EXPECT_EQ(std::get<llm::ParseFailure>(parse_critique(no_aspect)).rule, "missing aspects");
    auto zero = j;
    zero["part_scores"]["D"] = 0;
    EXPECT_EQ(std::get<llm::ParseFailure>(parse_critique(zero)).rule, "score range");
    auto fraction = j;
    fraction["part_scores"]["D"] = 3.5;
    EXPECT_EQ(std::get<llm::ParseFailure>(parse_critique(fraction)).rule, "score type");
    auto no_feedback = j;
    no_feedback.erase("feedback");
    EXPECT_EQ(std::get<llm::ParseFailure>(parse_critique(no_feedback)).rule, "missing feedback");
}

TEST(Critique, AspectNamesFoldToKeys) {
    EXPECT_EQ(aspect_from_string("Organization and Traceability"), ReviewAspect::OrganizationTraceability);
    EXPECT_EQ(aspect_from_string("technical_detail_executability"), ReviewAspect::TechnicalDetailExecutability);
    EXPECT_FALSE(aspect_from_string("vibes").has_value());
}

TEST(Chain, PartsAndJson) {
    const ChainOfThought user{order_tasks({t("E", TaskCategory::Entry), t("D", TaskCategory::Docs)})};
    EXPECT_EQ(part_ids(user), (std::vector<std::string>{"D", "E"}));
    const ChainOfThought sys{draft()};
    EXPECT_EQ(part_ids(sys).size(), 5u);
    EXPECT_EQ(chain_from_json(chain_to_json(user)), user);
    EXPECT_EQ(chain_from_json(chain_to_json(sys)), sys);
    EXPECT_NE(render_for_review(user).find("[part D]"), std::string::npos);
}

TEST(Chain, FromSrsBypass) {
    const auto user = chain_from_srs(srs(), ctx());
    ASSERT_NE(user.task_list(), nullptr);
    EXPECT_TRUE(validate_task_list(*user.task_list()).ok);
    const auto sys = chain_from_srs(srs(), ctx(PromptKind::SystemPrompt));
    ASSERT_NE(sys.system_prompt(), nullptr);
    EXPECT_TRUE(completeness_violations(*sys.system_prompt()).empty());
}
