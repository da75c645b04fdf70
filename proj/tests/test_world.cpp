#include <doctest.h>

#include <cmath>

#include "smi/episode.hpp"
#include "smi/error.hpp"
#include "smi/world.hpp"

using namespace smi;

namespace {

AgentSpec agent(const std::string& id, GridPos start, std::vector<double> goal,
                PolicyKind policy = PolicyKind::PureIndividual) {
    AgentSpec a;
    a.id = id;
    a.start = start;
    a.goal = std::move(goal);
    a.policy = policy;
    a.sma = 0.5;
    return a;
}

ScenarioConfig solo_walk() {
    ScenarioConfig c;
    c.name = "solo";
    c.width = 5;
    c.height = 5;
    c.horizon = 4;
    c.sites = {{"S", {2, 2}, SiteKind::Solo, 1, 10.0}};
    c.agents = {agent("solo", {1, 2}, {1.0})};
    return c;
}

}  // namespace

TEST_CASE("an agent next to a solo site steps on and then collects") {
    WorldState w = make_world(solo_walk(), 1);
    CHECK(w.agents[0].position == GridPos{1, 2});
    w = step(w);
    CHECK(w.agents[0].last_action == Action::East);
    CHECK(w.agents[0].position == GridPos{2, 2});
    CHECK(w.agents[0].last_reward == 0.0);
    w = step(w);
    CHECK(w.agents[0].last_action == Action::Interact);
    CHECK(w.agents[0].last_reward == 10.0);
    CHECK(w.sites[0].completed);
    CHECK(w.agents[0].goal_progress == 1.0);
    CHECK(w.tick == 2);
}

TEST_CASE("a collective site needs every agent") {
    ScenarioConfig c;
    c.width = 6;
    c.height = 6;
    c.horizon = 10;
    c.sites = {{"C", {2, 2}, SiteKind::Collective, 3, 9.0}};
    c.agents = {agent("a", {0, 0}, {1.0}), agent("b", {0, 1}, {1.0}), agent("c", {5, 5}, {0.0})};
    WorldState w = make_world(c, 1);
    w.agents[0].position = {2, 2};
    w.agents[1].position = {2, 2};
    for (int t = 0; t < 10; ++t) {
        w = step(w);
        CHECK(w.agents[0].last_action == Action::Interact);
        for (const auto& a : w.agents) CHECK(a.last_reward == 0.0);
    }
    CHECK_FALSE(w.sites[0].completed);
    CHECK(w.agents[2].position == GridPos{5, 5});
}

TEST_CASE("the lower id wins a contested cell") {
    ScenarioConfig c;
    c.width = 3;
    c.height = 3;
    c.horizon = 1;
    c.sites = {{"S", {1, 2}, SiteKind::Solo, 1, 1.0}};
    // Both believe the site sits on the empty cell between them.
    c.agents = {agent("b", {2, 0}, {1.0}), agent("a", {0, 0}, {1.0})};
    for (auto& a : c.agents) a.percepts[0] = SitePercept{GridPos{1, 0}, std::nullopt};
    WorldState w = make_world(c, 1);
    w = step(w);
    CHECK(w.agents[0].last_action == Action::West);
    CHECK(w.agents[1].last_action == Action::East);
    CHECK(w.agents[1].position == GridPos{1, 0});
    CHECK(w.agents[0].position == GridPos{2, 0});
}

TEST_CASE("spawns stay on the grid, off sites and apart") {
    ScenarioConfig c;
    c.width = 4;
    c.height = 4;
    c.sites = {{"S", {1, 1}, SiteKind::Solo, 1, 1.0}};
    for (int i = 0; i < 8; ++i) {
        auto a = agent("a" + std::to_string(i), {1, 1}, {1.0});
        a.spawn_radius = 2;
        c.agents.push_back(a);
    }
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto w = make_world(c, seed);
        for (std::size_t i = 0; i < w.agents.size(); ++i) {
            const auto p = w.agents[i].position;
            CHECK(p.x >= 0);
            CHECK(p.y >= 0);
            CHECK(p.x < 4);
            CHECK(p.y < 4);
            CHECK_FALSE(w.site_at(p).has_value());
            for (std::size_t j = i + 1; j < w.agents.size(); ++j) CHECK_FALSE(p == w.agents[j].position);
        }
    }
}

TEST_CASE("context metrics") {
    ScenarioConfig c;
    c.width = 5;
    c.height = 5;
    c.sites = {{"S", {4, 4}, SiteKind::Solo, 1, 1.0}, {"T", {0, 4}, SiteKind::Solo, 1, 1.0}};
    c.agents = {agent("a", {0, 0}, {1.0, 0.0}), agent("b", {1, 0}, {0.5, std::sqrt(3.0) / 2}),
                agent("c", {3, 0}, {1.0, 0.0})};
    WorldState w = make_world(c, 1);

    SUBCASE("individual self-definitions share nothing") {
        const auto m = derive_context_metrics(w);
        for (const auto& ctx : m.individual)
            for (const auto& q : ctx.contributors) CHECK(q.ssi.value() == 0.0);
        for (const auto& g : m.group.members()) CHECK(g.gi.value() == 0.0);
        CHECK(gsmi(m.group) == 0.0);
    }
    SUBCASE("a shared subgroup contributes salience x cosine") {
        const auto pair = AgenticStructure::from_members({"a", "b"});
        w.agents[0].self_def = {"a", pair, 0.8, LevelTag::Subgroup};
        w.agents[1].self_def = {"b", pair, 0.8, LevelTag::Subgroup};
        const auto m = derive_context_metrics(w);
        const auto& to_b = m.individual[0].contributors[0];
        CHECK(to_b.ssi.value() == 0.8);
        CHECK(to_b.ga.value() == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(to_b.ssi.value() * to_b.ga.value() == doctest::Approx(0.4).epsilon(1e-12));
        CHECK(m.individual[0].contributors[1].ssi.value() == 0.0);  // c is outside
        CHECK(m.individual[1].contributors[0].ssi.value() == 0.8);
    }
    SUBCASE("identical goals align perfectly") {
        for (auto& a : w.agents) a.goal = {0.3, 0.7};
        const auto m = derive_context_metrics(w);
        for (const auto& ctx : m.individual)
            for (const auto& q : ctx.contributors) CHECK(q.ga.value() == doctest::Approx(1.0));
    }
    SUBCASE("whole-group identification") {
        const auto all = AgenticStructure::from_members({"a", "b", "c"});
        for (auto& a : w.agents) a.self_def = {a.id, all, 0.6, LevelTag::Group};
        const auto m = derive_context_metrics(w);
        for (const auto& g : m.group.members()) {
            CHECK(g.gi.value() == 0.6);
            CHECK(g.siga.value() == doctest::Approx(1.0));  // identity goal is the group goal
        }
    }
}

TEST_CASE("cosine similarity") {
    const std::vector<double> a{1, 0}, b{0, 1}, z{0, 0}, neg{-2, 0};
    CHECK(cosine_similarity(a, a) == 1.0);
    CHECK(cosine_similarity(a, b) == 0.0);
    CHECK(cosine_similarity(a, z) == 0.0);
    CHECK(cosine_similarity(a, neg) == -1.0);
}

TEST_CASE("action scores point toward the target") {
    WorldState w = make_world(solo_walk(), 1);
    const Plan plan{0, {2, 2}, true};
    const auto s = score_actions(plan, {1, 2}, w);
    CHECK(kActions[argmax(s.scores)] == Action::East);
    const auto at = score_actions(plan, {2, 2}, w);
    CHECK(kActions[argmax(at.scores)] == Action::Interact);
    const Plan waiting{0, {2, 2}, false};
    CHECK(kActions[argmax(score_actions(waiting, {2, 2}, w).scores)] == Action::Stay);
    const Plan idle{std::nullopt, {1, 2}, true};
    CHECK(kActions[argmax(score_actions(idle, {1, 2}, w).scores)] == Action::Stay);
}

TEST_CASE("percepts use scripted beliefs and zero out completed sites") {
    auto c = solo_walk();
    c.agents[0].percepts[0] = SitePercept{GridPos{0, 0}, 3.0};
    WorldState w = make_world(c, 1);
    auto o = perceive(w, 0, {});
    CHECK(o.values == std::vector<double>{0, 0, 3.0});
    w.sites[0].completed = true;
    o = perceive(w, 0, {});
    CHECK(o.values[2] == 0.0);
}

TEST_CASE("stepping is deterministic and independent of thread count") {
    auto c = solo_walk();
    c.width = 8;
    c.height = 8;
    c.percept_noise = 0.3;
    c.sites.push_back({"T", {6, 6}, SiteKind::Subgroup, 2, 4.0});
    c.agents = {agent("a", {0, 0}, {1, 1}, PolicyKind::SociallyMinded), agent("b", {1, 0}, {1, 1}, PolicyKind::SociallyMinded),
                agent("c", {7, 7}, {0, 1}, PolicyKind::SociallyMinded), agent("d", {6, 7}, {1, 0}, PolicyKind::FixedCollective)};
    c.horizon = 15;
    const auto one = to_jsonl(run_episode(c, 42, {1}));
    CHECK(one == to_jsonl(run_episode(c, 42, {1})));
    CHECK(one == to_jsonl(run_episode(c, 42, {4})));
    CHECK(one == to_jsonl(run_episode(c, 42, {0})));
    CHECK(one != to_jsonl(run_episode(c, 43, {1})));
}
