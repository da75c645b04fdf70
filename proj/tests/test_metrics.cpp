#include <doctest.h>

#include <cmath>

#include "smi/error.hpp"
#include "smi/metrics.hpp"

using namespace smi;

namespace {

IndividualContext individual(double sma, std::vector<std::pair<double, double>> pairs) {
    IndividualContext ctx{SociallyMindedAbility(sma), {}};
    for (auto [s, g] : pairs) ctx.contributors.push_back({SharedSocialIdentity(s), GoalAlignment(g)});
    return ctx;
}

GroupContext group(std::vector<std::array<double, 3>> triples) {
    std::vector<GroupMember> m;
    for (auto t : triples) m.push_back({SociallyMindedAbility(t[0]), GroupIdentification(t[1]), SalientIdentityGoalAlignment(t[2])});
    return GroupContext(std::move(m));
}

const std::vector<std::pair<double, double>> kMixed{{.5, .5}, {.3, .7}, {.4, -.8}, {.7, -.3}, {0, -.9}};
const std::vector<std::pair<double, double>> kFive{{.5, .5}, {.3, .7}, {.4, .3}, {.7, .3}, {.5, .9}};

}  // namespace

TEST_CASE("social resource sums SSI x GA") {
    CHECK(social_resource(individual(.7, {{.5, .5}})) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(social_resource(individual(.7, {})) == 0.0);
    CHECK(std::abs(social_resource(individual(.7, kMixed)) - (-0.07)) < 1e-12);
}

TEST_CASE("ISMI matches the worked examples at full precision") {
    struct Case {
        double sma;
        std::vector<std::pair<double, double>> c;
        double exact;
    };
    const std::vector<Case> cases{
        {.7, {{.5, .5}}, 0.175},
        {.7, kMixed, -0.049},
        {.7, {{.5, .5}, {.3, .7}}, 0.322},
        {.7, kFive, 0.868},
        {.3, kFive, 0.372},
        {.7, {{.1, .5}, {.2, .7}, {0, .3}, {.1, .3}, {.1, .9}}, 0.217},
    };
    for (const auto& c : cases) {
        const auto ctx = individual(c.sma, c.c);
        CHECK(std::abs(ismi(ctx) - c.exact) < 1e-12);
        CHECK(std::abs(ismi(ctx) - c.sma * social_resource(ctx)) < 1e-12);
    }
    CHECK(ismi(individual(0.3, {})) == 0.0);
}

TEST_CASE("GSMI matches the worked examples at full precision") {
    CHECK(std::abs(gsmi(group({{.7, .3, .5}, {.8, .8, .3}})) - 0.1485) < 1e-12);
    CHECK(std::abs(gsmi(group({{.7, .3, .5}, {.8, .8, .3}, {.6, .2, -.8}, {.9, .7, .4}, {.5, .3, -.1}})) - 0.0876) < 1e-12);
    CHECK(std::abs(gsmi(group({{.7, .6, .5}})) - 0.21) < 1e-12);
    CHECK(std::abs(gsmi(group({{.7, .6, .5}, {.8, .8, .3}, {.3, .2, .8}, {.9, .7, .4}, {.2, .5, .2}})) - 0.1444) < 1e-12);
    CHECK(std::abs(gsmi(group({{.8, .6, .5}, {.9, .8, .3}, {1, .2, .8}, {.8, .7, .4}, {.9, .5, .2}})) - 0.186) < 1e-12);
    CHECK(std::abs(gsmi(group({{.7, .6, .9}, {.8, .8, .7}, {.3, .2, .8}, {.9, .7, .8}, {.2, .5, .9}})) - 0.2936) < 1e-12);
    CHECK(std::abs(gsmi(group({{.7, .9, .5}, {.8, .9, .3}, {.3, .7, .8}, {.9, .8, .4}, {.2, .7, .2}})) - 0.203) < 1e-12);
}

TEST_CASE("empty groups are rejected") {
    try {
        GroupContext g({});
        FAIL("expected EmptyGroup");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyGroup);
    }
}

TEST_CASE("out-of-range inputs are rejected, not clamped") {
    CHECK_THROWS_AS(SociallyMindedAbility(1.01), Error);
    CHECK_THROWS_AS(SociallyMindedAbility(-0.1), Error);
    CHECK_THROWS_AS(SharedSocialIdentity(1.5), Error);
    CHECK_THROWS_AS(GoalAlignment(-1.2), Error);
    CHECK_THROWS_AS(GroupIdentification(std::nan("")), Error);
    CHECK_THROWS_AS(SalientIdentityGoalAlignment(2.0), Error);
    CHECK_NOTHROW(GoalAlignment(-1.0));
    CHECK_NOTHROW(SharedSocialIdentity(0.0));
    try {
        SharedSocialIdentity bad(1.5);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Range);
        CHECK(std::string(e.what()).find("SSI must be in [0, 1]") != std::string::npos);
    }
}

TEST_CASE("aligned ability") {
    CHECK(aligned_ability(SociallyMindedAbility(.7), SharedSocialIdentity(.5), GoalAlignment(.5)).value() ==
          doctest::Approx(0.175).epsilon(1e-15));
    CHECK(aligned_ability(SociallyMindedAbility(.9), SharedSocialIdentity(0), GoalAlignment(-.4)).value() == 0.0);
    CHECK(aligned_ability(SociallyMindedAbility(1), SharedSocialIdentity(1), GoalAlignment(-1)).value() == -1.0);
}

TEST_CASE("aligned-ability routes equal the direct routes exactly") {
    const auto we1 = individual(.7, {{.5, .5}});
    CHECK(ismi_via_aligned_abilities(we1) == ismi(we1));
    CHECK(std::abs(ismi_via_aligned_abilities(we1) - 0.175) < 1e-12);
    const auto we2 = individual(.7, kMixed);
    CHECK(ismi_via_aligned_abilities(we2) == ismi(we2));
    CHECK(ismi_via_aligned_abilities(individual(.4, {})) == 0.0);

    const auto b2 = group({{.7, .6, .5}, {.8, .8, .3}, {.3, .2, .8}, {.9, .7, .4}, {.2, .5, .2}});
    CHECK(gsmi_via_aligned_abilities(b2) == gsmi(b2));
    CHECK(std::abs(gsmi_via_aligned_abilities(b2) - 0.1444) < 1e-12);
    const auto b1 = group({{.7, .6, .5}});
    CHECK(gsmi_via_aligned_abilities(b1) == gsmi(b1));
    CHECK(gsmi_via_aligned_abilities(group({{.7, 0, .5}, {.2, 0, -.3}})) == 0.0);
}

TEST_CASE("homogeneous approximation of social resources") {
    const auto homo = individual(.7, {{.5, .5}, {.5, .5}});
    CHECK(homogeneous_sr_approximation(1.0, .5) == 0.5);
    CHECK(homogeneous_sr_approximation(1.0, .5) == social_resource(homo));
    CHECK(homogeneous_sr_approximation(0.0, -.7) == 0.0);
    // Heterogeneous contributors: the approximation is visibly off.
    CHECK(homogeneous_sr_approximation(1.9, -0.16) == doctest::Approx(-0.304));
    CHECK(std::abs(social_resource(individual(.7, kMixed)) - (-0.07)) < 1e-12);
    CHECK_THROWS_AS(homogeneous_sr_approximation(-1.0, 0.2), Error);
    CHECK_THROWS_AS(homogeneous_sr_approximation(1.0, 1.2), Error);
}
