#include <gtest/gtest.h>

#include <random>

#include "reqforge/agents/critic.hpp"
#include "reqforge/agents/interview.hpp"
#include "reqforge/agents/knowledge.hpp"
#include "reqforge/agents/prompts.hpp"
#include "reqforge/agents/srs.hpp"
#include "reqforge/cot/chain.hpp"
#include "support.hpp"

using namespace reqforge;
using namespace reqforge::agents;
using reqforge::testing::fenced;
using reqforge::testing::Script;

namespace {

ScenarioContext ctx() { return default_context(PromptKind::UserPrompt, "I want a 2048 game"); }

RequirementStatement overall(const std::string& s) {
    return {RequirementTemplate::OverallSystem, "The game", s, std::nullopt};
}

InterviewQuestion q(InterviewStep step) { return {step, "What?", "To know."}; }

InterviewRecord record_with(std::vector<InterviewStep> steps) {
    InterviewRecord r;
    for (auto s : steps) r.append(q(s), {overall("work")});
    return r;
}

}  // namespace

TEST(Knowledge, BundleMatchesManifestHashes) {
    EXPECT_TRUE(verify_knowledge_bundle().empty());
    EXPECT_FALSE(knowledge_bundle().empty());
    EXPECT_THROW(knowledge_text("missing.txt"), std::out_of_range);
}

TEST(AgentPrompt, CriticCarriesAllReviewAspectHeadings) {
    const auto p = build_agent_prompt(AgentRole::Critic, ctx());
    for (auto h : {"### Completeness", "### Correctness", "### Organization and Traceability", "### Clear", "### Concise",
                   "### Consistency"}) {
        EXPECT_NE(p.find(h), std::string::npos) << h;
    }
}

TEST(AgentPrompt, IntervieweeCarriesThreeTemplateSkeletons) {
    const auto p = build_agent_prompt(AgentRole::Interviewee, ctx());
    EXPECT_NE(p.find("[overall] <system> shall"), std::string::npos);
    EXPECT_NE(p.find("[component] <component> shall"), std::string::npos);
    EXPECT_NE(p.find("[conditional] When <condition>, <component> shall"), std::string::npos);
}

TEST(AgentPrompt, BeginsWithTeamIntroAndKeepsOrder) {
    auto c = ctx();
    c.team_intro = "T";
    c.scenario_description = "SCENARIO-TEXT";
    for (auto role : kAllRoles) {
        const auto p = build_agent_prompt(role, c);
        EXPECT_TRUE(p.starts_with("T")) << to_string(role);
        const auto scen = p.find("SCENARIO-TEXT");
        const auto instr = p.find(std::string(role_instructions(role)).substr(0, 30));
        ASSERT_NE(scen, std::string::npos);
        ASSERT_NE(instr, std::string::npos);
        EXPECT_LT(scen, instr);
    }
}

TEST(AgentPrompt, RoleKnowledgeSelection) {
    const auto coter = build_agent_prompt(AgentRole::CoTer, ctx());
    EXPECT_NE(coter.find(std::string(knowledge_text("output_schemas.txt")).substr(0, 40)), std::string::npos);
    EXPECT_NE(coter.find(std::string(knowledge_text("prompt_engineering.txt")).substr(0, 40)), std::string::npos);
    const auto interviewer = build_agent_prompt(AgentRole::Interviewer, ctx());
    EXPECT_NE(interviewer.find(std::string(knowledge_text("interview_protocol.txt")).substr(0, 40)), std::string::npos);
}

TEST(AgentPrompt, IsPure) {
    for (auto role : kAllRoles) EXPECT_EQ(build_agent_prompt(role, ctx()), build_agent_prompt(role, ctx()));
}

TEST(Context, DefaultContextIsValid) {
    EXPECT_TRUE(context_violations(ctx()).empty());
    auto c = ctx();
    c.initial_prompt = "  ";
    EXPECT_FALSE(context_violations(c).empty());
}

TEST(Requirements, LineFormsParse) {
    auto a = parse_requirement("[overall] The game shall run offline");
    ASSERT_TRUE(llm::ok(a));
    EXPECT_EQ(std::get<RequirementStatement>(a).kind, RequirementTemplate::OverallSystem);
    auto c = parse_requirement("[conditional] When the board is full, the game shall end");
    ASSERT_TRUE(llm::ok(c));
    const auto& r = std::get<RequirementStatement>(c);
    EXPECT_EQ(r.condition, "the board is full");
    EXPECT_EQ(r.subject, "the game");
    EXPECT_EQ(r.statement, "end");
}

TEST(Requirements, ConditionalWithoutConditionIsRejected) {
    auto p = parse_requirement("[conditional] The game shall end");
    ASSERT_FALSE(llm::ok(p));
    EXPECT_EQ(std::get<llm::ParseFailure>(p).rule, "missing-condition");
    RequirementStatement bad{RequirementTemplate::ComponentConditional, "x", "y", std::nullopt};
    EXPECT_FALSE(statement_violations(bad).empty());
    RequirementStatement extra{RequirementTemplate::OverallSystem, "x", "y", "z"};
    EXPECT_FALSE(statement_violations(extra).empty());
}

TEST(RequirementsProperty, FuzzedInstantiationsMatchExactlyOneTemplate) {
    std::mt19937 rng(11);
    const std::vector<std::string> words = {"board", "tile", "score", "panel", "the", "game", "player", "bright", "moves",
                                            "42", "quickly", "menu"};
    auto phrase = [&](int min_words) {
        std::string s;
        const int n = min_words + static_cast<int>(rng() % 4);
        for (int i = 0; i < n; ++i) s += (i ? " " : "") + words[rng() % words.size()];
        return s;
    };
    for (int i = 0; i < 1000; ++i) {
        RequirementStatement r;
        r.kind = static_cast<RequirementTemplate>(rng() % 3);
        r.subject = phrase(1);
        r.statement = phrase(1);
        if (r.kind == RequirementTemplate::ComponentConditional) r.condition = phrase(1);
        ASSERT_TRUE(statement_violations(r).empty());
        const auto line = render_requirement(r);
        int matches = 0;
        for (auto tag : {"[overall] ", "[component] ", "[conditional] "}) matches += line.starts_with(tag);
        EXPECT_EQ(matches, 1);
        auto back = parse_requirement(line);
        ASSERT_TRUE(llm::ok(back)) << line;
        EXPECT_EQ(std::get<RequirementStatement>(back), r) << line;
    }
}

TEST(Interview, EmptyRecordGetsComponentsQuestion) {
    auto gw = Script().question("components", "Which parts?").gateway();
    auto out = next_interview_question(InterviewRecord{}, ctx(), InterviewOptions{}, *gw);
    ASSERT_TRUE(std::holds_alternative<InterviewQuestion>(out));
    EXPECT_EQ(std::get<InterviewQuestion>(out).step, InterviewStep::Components);
    EXPECT_EQ(std::get<InterviewQuestion>(out).text, "Which parts?");
}

TEST(Interview, BudgetReachedClosesStepWithoutCallingModel) {
    auto gw = Script().gateway();  // any call would exhaust it
    const auto rec = record_with({InterviewStep::Components, InterviewStep::Components, InterviewStep::Components});
    auto out = next_interview_question(rec, ctx(), InterviewOptions{3, false}, *gw);
    EXPECT_EQ(out, InterviewOutcome(StepComplete{InterviewStep::Components}));
}

TEST(Interview, FrontEndExhaustedIsInterviewComplete) {
    auto gw = Script().gateway();
    const auto rec = record_with({InterviewStep::FrontEnd});
    auto out = next_interview_question(rec, ctx(), InterviewOptions{1, false}, *gw);
    EXPECT_TRUE(std::holds_alternative<InterviewComplete>(out));
    // With user guidance the front end is not the last step.
    out = next_interview_question(rec, ctx(), InterviewOptions{1, true}, *gw);
    EXPECT_EQ(out, InterviewOutcome(StepComplete{InterviewStep::FrontEnd}));
}

TEST(Interview, InterviewerCanCloseAStep) {
    auto gw = Script().step_complete("core_functions").gateway();
    const auto rec = record_with({InterviewStep::Components});
    auto out = next_interview_question(rec, InterviewStep::CoreFunctions, ctx(), InterviewOptions{}, *gw);
    EXPECT_EQ(out, InterviewOutcome(StepComplete{InterviewStep::CoreFunctions}));
}

TEST(Interview, AskingForAnEarlierStepIsRejected) {
    auto gw = Script().gateway();
    const auto rec = record_with({InterviewStep::FrontEnd});
    EXPECT_THROW(next_interview_question(rec, InterviewStep::Components, ctx(), InterviewOptions{}, *gw),
                 std::invalid_argument);
}

TEST(Interview, QuestionWithoutPurposeIsParseError) {
    auto gw = Script().raw("*", fenced({{"status", "question"}, {"question", "Q?"}})).gateway();
    EXPECT_THROW(next_interview_question(InterviewRecord{}, ctx(), InterviewOptions{}, *gw), llm::ParseError);
}

TEST(Answer, SingleOverallStatement) {
    auto gw = Script().answer("components", {"[overall] The game shall run in a browser"}).gateway();
    auto out = answer_question(q(InterviewStep::Components), ctx(), *gw);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].kind, RequirementTemplate::OverallSystem);
}

TEST(Answer, ConditionalWithoutConditionSurfacesParseFailure) {
    auto gw = Script().answer("components", {"[conditional] The board shall reset"}).gateway();
    try {
        answer_question(q(InterviewStep::Components), ctx(), *gw);
        FAIL();
    } catch (const llm::ParseError& e) {
        EXPECT_EQ(e.failure().rule, "missing-condition");
    }
}

TEST(Answer, MixedTemplatesKeepReplyOrder) {
    auto gw = Script()
                  .answer("components", {"[component] The board shall have 16 cells", "[overall] The game shall be free",
                                         "[conditional] When the board is full, the game shall end"})
                  .gateway();
    auto out = answer_question(q(InterviewStep::Components), ctx(), *gw);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out[0].kind, RequirementTemplate::ComponentConstant);
    EXPECT_EQ(out[1].kind, RequirementTemplate::OverallSystem);
    EXPECT_EQ(out[2].kind, RequirementTemplate::ComponentConditional);
}

TEST(Answer, PlainLinesAreAccepted) {
    auto gw = Script().raw("*", "- [overall] The game shall be fun\n- [component] The menu shall list modes\n").gateway();
    EXPECT_EQ(answer_question(q(InterviewStep::Components), ctx(), *gw).size(), 2u);
}

TEST(Answer, EmptyListIsRejected) {
    auto gw = Script().raw("*", fenced({{"requirements", nlohmann::json::array()}})).gateway();
    EXPECT_THROW(answer_question(q(InterviewStep::Components), ctx(), *gw), llm::ParseError);
}

TEST(InterviewRecordTest, MonotonicityIsEnforced) {
    auto rec = record_with({InterviewStep::CoreFunctions});
    EXPECT_THROW(rec.append(q(InterviewStep::Components), {overall("x")}), std::invalid_argument);
    EXPECT_THROW(rec.append(q(InterviewStep::FrontEnd), {}), std::invalid_argument);
    EXPECT_EQ(rec.size(), 1u);
}

TEST(InterviewRecordProperty, StepsNeverDecreaseAfterAnyMutation) {
    std::mt19937 rng(5);
    for (int round = 0; round < 200; ++round) {
        InterviewRecord rec;
        for (int i = 0; i < 20; ++i) {
            const auto step = static_cast<InterviewStep>(rng() % 5);
            try {
                rec.append(q(step), {overall("x")});
            } catch (const std::invalid_argument&) {
            }
            EXPECT_TRUE(record_violations(rec.turns()).empty());
        }
    }
}

TEST(ConductInterview, FourStepsWithExplicitClosing) {
    auto gw = Script().interview(2, 4, true).gateway();
    const auto rec = conduct_interview(ctx(), InterviewOptions{3, false}, *gw);
    ASSERT_EQ(rec.size(), 8u);
    EXPECT_EQ(rec.turns().front().question.step, InterviewStep::Components);
    EXPECT_EQ(rec.turns().back().question.step, InterviewStep::FrontEnd);
}

TEST(ConductInterview, UserGuidanceAddsFifthStep) {
    auto gw = Script().interview(1, 5, true).gateway();
    const auto rec = conduct_interview(ctx(), InterviewOptions{3, true}, *gw);
    ASSERT_EQ(rec.size(), 5u);
    EXPECT_EQ(rec.turns().back().question.step, InterviewStep::UserGuidance);
}

namespace {

nlohmann::json section(const std::string& heading, std::vector<int> turns) {
    return {{"heading", heading}, {"body", "text"}, {"source_turns", turns}};
}

}  // namespace

TEST(DraftSrs, TwoSectionsTracingOneTurn) {
    const auto rec = record_with({InterviewStep::Components});
    auto gw = Script().raw("[request:interviewer.srs]", fenced({{"sections", {section("Purpose", {1}), section("Scope", {1})}}})).gateway();
    const auto srs = draft_srs(rec, ctx(), *gw);
    ASSERT_EQ(srs.sections.size(), 2u);
    for (const auto& s : srs.sections) EXPECT_EQ(s.source_turn_ids, std::vector<int>{1});
}

TEST(DraftSrs, UntracedTurnIsTraceabilityFailure) {
    const auto rec = record_with({InterviewStep::Components, InterviewStep::CoreFunctions});
    auto gw = Script().raw("*", fenced({{"sections", {section("Purpose", {1})}}})).gateway();
    try {
        draft_srs(rec, ctx(), *gw);
        FAIL();
    } catch (const llm::ParseError& e) {
        EXPECT_EQ(e.failure().rule, "traceability");
    }
}

TEST(DraftSrs, CitingUnknownTurnIsRejected) {
    const auto rec = record_with({InterviewStep::Components});
    auto gw = Script().raw("*", fenced({{"sections", {section("Purpose", {1, 7})}}})).gateway();
    EXPECT_THROW(draft_srs(rec, ctx(), *gw), llm::ParseError);
}

TEST(DraftSrs, Deterministic) {
    const auto rec = record_with({InterviewStep::Components});
    auto script = Script().raw("*", fenced({{"sections", {section("Purpose", {1}), section("Scope", {1})}}}));
    EXPECT_EQ(draft_srs(rec, ctx(), *script.gateway()), draft_srs(rec, ctx(), *script.gateway()));
}

TEST(DraftSrs, RequestOffersDefaultSkeleton) {
    const auto req = build_srs_request(record_with({InterviewStep::Components}), ctx(), {});
    for (auto h : kDefaultSrsSkeleton) EXPECT_NE(req.messages.back().content.find("- " + std::string(h)), std::string::npos);
}

TEST(SrsProperty, TraceabilityEqualsTurnSet) {
    std::mt19937 rng(9);
    for (int round = 0; round < 300; ++round) {
        const int turns = 1 + static_cast<int>(rng() % 6);
        std::vector<InterviewStep> steps(turns, InterviewStep::Components);
        const auto rec = record_with(steps);
        SrsDraft d;
        std::set<int> cited;
        const int sections = 1 + static_cast<int>(rng() % 4);
        for (int s = 0; s < sections; ++s) {
            SrsSection sec{"H" + std::to_string(s), "b", {}};
            for (int t = 1; t <= turns + 1; ++t) {
                if (rng() % 3 == 0) {
                    sec.source_turn_ids.push_back(t);
                    cited.insert(t);
                }
            }
            d.sections.push_back(sec);
        }
        std::set<int> expected;
        for (int t = 1; t <= turns; ++t) expected.insert(t);
        EXPECT_EQ(srs_violations(d, rec).empty(), cited == expected);
    }
}

TEST(WrapRecord, CitesEveryTurn) {
    const auto rec = record_with({InterviewStep::Components, InterviewStep::FrontEnd});
    const auto srs = wrap_record_as_srs(rec, ctx());
    ASSERT_EQ(srs.sections.size(), 1u);
    EXPECT_EQ(srs.sections[0].source_turn_ids, (std::vector<int>{1, 2}));
    EXPECT_TRUE(srs_violations(srs, rec).empty());
}

namespace {

cot::ChainOfThought sample_chain() {
    cot::TaskList list;
    list.tasks = {{"D", "d", "d", {}, cot::TaskCategory::Docs}, {"E", "e", "e", {"D"}, cot::TaskCategory::Entry}};
    return cot::ChainOfThought{list};
}

SrsDraft sample_srs() { return SrsDraft{{{"Purpose", "A game.", {1}}}}; }

}  // namespace

TEST(Critique, AllPartsScoredFour) {
    auto gw = Script().critique({"D", "E"}, 4).gateway();
    const auto report = critique(sample_chain(), sample_srs(), ctx(), *gw);
    EXPECT_EQ(cot::min_part_score(report), 4);
    EXPECT_EQ(report.aspect_notes.size(), 8u);
}

TEST(Critique, ScoreSixIsRangeViolation) {
    auto j = reqforge::testing::critique_json({"D", "E"});
    j["part_scores"]["E"] = 6;
    auto gw = Script().raw("*", fenced(j)).gateway();
    try {
        critique(sample_chain(), sample_srs(), ctx(), *gw);
        FAIL();
    } catch (const llm::ParseError& e) {
        EXPECT_EQ(e.failure().rule, "score range");
    }
}

TEST(Critique, MissingSummaryIsParseFailure) {
    auto j = reqforge::testing::critique_json({"D", "E"});
    j.erase("summary");
    auto gw = Script().raw("*", fenced(j)).gateway();
    try {
        critique(sample_chain(), sample_srs(), ctx(), *gw);
        FAIL();
    } catch (const llm::ParseError& e) {
        EXPECT_EQ(e.failure().rule, "missing summary");
    }
}

TEST(Critique, UnscoredPartIsCoverageFailure) {
    auto gw = Script().critique({"D"}).gateway();
    try {
        critique(sample_chain(), sample_srs(), ctx(), *gw);
        FAIL();
    } catch (const llm::ParseError& e) {
        EXPECT_EQ(e.failure().rule, "part-coverage");
    }
}

TEST(Critique, RequestNamesTheParts) {
    const auto req = build_critique_request(sample_chain(), sample_srs(), ctx(), {});
    EXPECT_NE(req.messages.back().content.find("Score exactly these parts: D, E"), std::string::npos);
}

TEST(Notes, FeedbackAndRetryNoteAreAppended) {
    GenerationNotes notes;
    notes.reviewer_feedback = {"too vague"};
    notes.retry_note = "schema: missing id";
    const auto out = append_notes("BASE", notes);
    EXPECT_TRUE(out.starts_with("BASE"));
    EXPECT_NE(out.find("1. too vague"), std::string::npos);
    EXPECT_NE(out.find("schema: missing id"), std::string::npos);
    EXPECT_EQ(append_notes("BASE", {}), "BASE");
}
