#include <doctest.h>

#include <random>

#include "smi/error.hpp"
#include "smi/influence.hpp"

using namespace smi;

namespace {

SelfDefinition pair_def(double salience) {
    return {"a", AgenticStructure::from_members({"a", "b"}), salience, LevelTag::Subgroup};
}

}  // namespace

TEST_CASE("fuse_perception") {
    const Observation own{"a", {0.0}, {}};
    const std::vector<Observation> peers{{"b", {1.0}, {}}};
    CHECK(fuse_perception(own, peers, pair_def(1.0)).values == std::vector<double>{0.5});
    CHECK(fuse_perception(own, peers, pair_def(0.0)).values == own.values);
    CHECK(fuse_perception(own, peers, SelfDefinition::individual("a")).values == own.values);

    // Peers outside the structure do not count.
    const std::vector<Observation> outsider{{"c", {1.0}, {}}};
    CHECK(fuse_perception(own, outsider, pair_def(1.0)).values == own.values);

    // Confidence weights the channel.
    const Observation sure{"a", {0.0, 0.0}, {1.0, 0.0}};
    const std::vector<Observation> peer2{{"b", {1.0, 1.0}, {1.0, 1.0}}};
    const auto fused = fuse_perception(sure, peer2, pair_def(1.0));
    CHECK(fused.values[0] == doctest::Approx(0.5));
    CHECK(fused.values[1] == doctest::Approx(1.0));

    const std::vector<Observation> wrong_dim{{"b", {1.0, 2.0}, {}}};
    try {
        fuse_perception(own, wrong_dim, pair_def(1.0));
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DimensionMismatch);
    }
}

TEST_CASE("fused values stay within the per-channel input range") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int c = 0; c < 500; ++c) {
        Observation own{"a", {u(rng), u(rng)}, {}};
        std::vector<Observation> peers{{"b", {u(rng), u(rng)}, {}}};
        const auto out = fuse_perception(own, peers, pair_def((u(rng) + 5) / 10));
        for (std::size_t k = 0; k < 2; ++k) {
            CHECK(out.values[k] >= std::min(own.values[k], peers[0].values[k]) - 1e-12);
            CHECK(out.values[k] <= std::max(own.values[k], peers[0].values[k]) + 1e-12);
        }
    }
}

TEST_CASE("weight_decisions") {
    const ActionScores own{{1.0, 0.0}};
    const std::vector<std::pair<AgentId, ActionScores>> peers{{"b", {{0.0, 1.0}}}};
    const auto blended = weight_decisions(own, peers, pair_def(1.0));
    CHECK(blended.scores == std::vector<double>{0.5, 0.5});
    CHECK(argmax(blended.scores) == 0);
    CHECK(weight_decisions(own, peers, SelfDefinition::individual("a")).scores == own.scores);

    const std::vector<std::pair<AgentId, ActionScores>> bad{{"b", {{0.0, 1.0, 2.0}}}};
    try {
        weight_decisions(own, bad, pair_def(1.0));
        FAIL("expected ActionSetMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ActionSetMismatch);
    }
}

TEST_CASE("three like-minded peers outvote a smaller own margin") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0, 1);
    const SelfDefinition def{"a", AgenticStructure::from_members({"a", "b", "c", "d"}), 1.0, LevelTag::Group};
    for (int c = 0; c < 1000; ++c) {
        const double own_margin = u(rng), peer_margin = u(rng);
        const ActionScores own{{own_margin, 0.0}};
        const ActionScores peer{{0.0, peer_margin}};
        const std::vector<std::pair<AgentId, ActionScores>> peers{{"b", peer}, {"c", peer}, {"d", peer}};
        const auto out = weight_decisions(own, peers, def);
        if (peer_margin > own_margin) CHECK(out.scores[1] > out.scores[0]);
    }
}

TEST_CASE("shape_utility") {
    UtilitySpec spec{{0.0}, {{"b", {2.0}}}, {1.0}};
    CHECK(shape_utility(spec, pair_def(0.5)) == std::vector<double>{1.5});
    CHECK(shape_utility(spec, pair_def(0.0)) == spec.self_utility);
    CHECK(shape_utility(spec, SelfDefinition::individual("a")) == spec.self_utility);

    UtilitySpec outsider{{0.0}, {{"c", {2.0}}}, {}};
    CHECK(shape_utility(outsider, pair_def(1.0)) == std::vector<double>{0.0});
}

TEST_CASE("argmax takes the first maximum") {
    CHECK(argmax({1.0, 3.0, 3.0, 2.0}) == 1);
    CHECK(argmax({0.0}) == 0);
}
