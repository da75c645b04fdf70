#include <doctest.h>

#include <cmath>

#include "smi/episode.hpp"
#include "smi/error.hpp"

using namespace smi;

namespace {

ScenarioConfig small() {
    ScenarioConfig c;
    c.name = "small";
    c.width = 5;
    c.height = 5;
    c.horizon = 4;
    c.sites = {{"S", {2, 2}, SiteKind::Solo, 1, 10.0}};
    AgentSpec a;
    a.id = "solo";
    a.start = {1, 2};
    a.goal = {1.0};
    c.agents = {a};
    return c;
}

AgentTick tick_for(const std::string& id, double ismi, double progress) {
    AgentTick t;
    t.id = id;
    t.ismi = ismi;
    t.goal_progress = progress;
    return t;
}

}  // namespace

TEST_CASE("episode log and report for a solo walk") {
    const auto log = run_episode(small(), 3);
    REQUIRE(log.ticks.size() == 4);
    CHECK(log.ticks[1].completed_sites == std::vector<std::string>{"S"});
    const auto r = evaluate(log);
    REQUIRE(r.agents.size() == 1);
    CHECK(r.agents[0].goal_attainment == 1.0);
    CHECK(r.agents[0].ticks_to_goal == 2);
    CHECK(r.agents[0].total_reward == 10.0);
    CHECK(r.group_attainment == 1.0);
    CHECK(r.policy_attainment.at("socially_minded") == 1.0);
}

TEST_CASE("horizon 0 and empty task lists") {
    auto c = small();
    c.horizon = 0;
    const auto log = run_episode(c, 1);
    CHECK(log.ticks.empty());
    const auto r = evaluate(log);
    CHECK(r.ticks == 0);
    CHECK(r.agents[0].goal_attainment == 0.0);
    CHECK(r.mean_gsmi == 0.0);

    auto none = small();
    none.sites.clear();
    none.agents[0].goal.clear();
    none.horizon = 5;
    const auto r2 = evaluate(run_episode(none, 1));
    CHECK(r2.group_attainment == 0.0);
    CHECK(r2.agents[0].goal_attainment == 0.0);
    CHECK(std::isfinite(r2.mean_gsmi));
}

TEST_CASE("evaluate on a hand-built three-tick log") {
    EpisodeLog log;
    log.scenario = "hand";
    log.horizon = 3;
    log.agent_ids = {"p", "q"};
    log.policies = {PolicyKind::SociallyMinded, PolicyKind::PureIndividual};
    for (int t = 1; t <= 3; ++t) {
        TickRecord rec;
        rec.tick = t;
        rec.agents = {tick_for("p", 0.1 * t, t >= 2 ? 1.0 : 0.0), tick_for("q", 0.5, 0.0)};
        rec.gsmi = 0.2 * t;
        log.ticks.push_back(rec);
    }
    log.summary = EpisodeSummary{{{"p", PolicyKind::SociallyMinded, 1.0, 5.0}, {"q", PolicyKind::PureIndividual, 0.0, 0.0}},
                                 0.5, 5.0, {"S"}};
    const auto r = evaluate(log);
    CHECK(r.agents[0].mean_ismi == doctest::Approx(0.2));
    CHECK(r.agents[0].final_ismi == doctest::Approx(0.3));
    CHECK(r.agents[0].ticks_to_goal == 2);
    CHECK_FALSE(r.agents[1].ticks_to_goal.has_value());
    CHECK(r.agents[1].mean_ismi == doctest::Approx(0.5));
    CHECK(r.mean_gsmi == doctest::Approx(0.4));
    CHECK(r.final_gsmi == doctest::Approx(0.6));
    CHECK(r.group_attainment == 0.5);
    CHECK(r.policy_attainment.at("socially_minded") == 1.0);
    CHECK(r.policy_attainment.at("pure_individual") == 0.0);

    auto truncated = log;
    truncated.ticks.pop_back();
    CHECK_THROWS_AS(evaluate(truncated), Error);
    auto no_summary = log;
    no_summary.summary.reset();
    try {
        evaluate(no_summary);
        FAIL("expected IncompleteLog");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::IncompleteLog);
    }
}

TEST_CASE("a log with no rewards has zero attainment") {
    auto c = small();
    c.agents[0].goal = {0.0};
    const auto r = evaluate(run_episode(c, 1));
    CHECK(r.agents[0].goal_attainment == 0.0);
    CHECK(r.agents[0].total_reward == 0.0);
}

TEST_CASE("JSON-lines round trip is lossless") {
    ScenarioConfig c = load_scenario(SMI_CONFIG_DIR "/split_task.json");
    c.horizon = 12;
    const auto log = run_episode(c, 7);
    const auto text = to_jsonl(log);
    const auto back = from_jsonl(text);
    CHECK(to_jsonl(back) == text);
    CHECK(back.ticks.size() == 12);
    CHECK(back.ticks[5].agents[2].ismi == log.ticks[5].agents[2].ismi);
    CHECK(trajectory_digest(back) == trajectory_digest(log));

    // Without the summary line the log is incomplete.
    auto cut = text.substr(0, text.rfind('\n', text.size() - 2) + 1);
    CHECK_THROWS_AS(evaluate(from_jsonl(cut)), Error);
}

TEST_CASE("seeds change only rng-driven parts of the report") {
    const auto c = load_scenario(SMI_CONFIG_DIR "/split_task.json");
    const auto a = evaluate(run_episode(c, 1));
    const auto b = evaluate(run_episode(c, 2));
    CHECK(a.scenario == b.scenario);
    CHECK(a.ticks == b.ticks);
    CHECK(a.agents.size() == b.agents.size());
    for (std::size_t i = 0; i < a.agents.size(); ++i) CHECK(a.agents[i].id == b.agents[i].id);
}
