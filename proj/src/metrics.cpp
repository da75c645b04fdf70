#include "smi/metrics.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "smi/error.hpp"

namespace smi {

namespace {

template <typename Tag>
constexpr const char* label() {
    if constexpr (std::is_same_v<Tag, SmaTag>) return "SMA";
    else if constexpr (std::is_same_v<Tag, SsiTag>) return "SSI";
    else if constexpr (std::is_same_v<Tag, GaTag>) return "GA";
    else if constexpr (std::is_same_v<Tag, GiTag>) return "GI";
    else if constexpr (std::is_same_v<Tag, SigaTag>) return "SIGA";
    else return "AA";
}

}  // namespace

namespace detail {

template <typename Tag, int Lo>
Bounded<Tag, Lo>::Bounded(double v) : value_(v) {
    if (!(v >= lower && v <= upper)) {
        std::ostringstream os;
        os << label<Tag>() << " must be in [" << Lo << ", 1], got " << v;
        throw Error(ErrorKind::Range, os.str());
    }
}

template class Bounded<SmaTag, 0>;
template class Bounded<SsiTag, 0>;
template class Bounded<GaTag, -1>;
template class Bounded<GiTag, 0>;
template class Bounded<SigaTag, -1>;
template class Bounded<AaTag, -1>;

}  // namespace detail

GroupContext::GroupContext(std::vector<GroupMember> members) : members_(std::move(members)) {
    if (members_.empty()) {
        throw Error(ErrorKind::EmptyGroup, "a group context needs at least one member");
    }
}

double social_resource(const IndividualContext& ctx) noexcept {
    double sr = 0.0;
    for (const auto& c : ctx.contributors) sr += c.ssi.value() * c.ga.value();
    return sr;
}

double ismi(const IndividualContext& ctx) noexcept {
    // Distributed form; see ismi_via_aligned_abilities for why.
    double total = 0.0;
    const double sma = ctx.target_sma.value();
    for (const auto& c : ctx.contributors) total += sma * c.ssi.value() * c.ga.value();
    return total;
}

double gsmi(const GroupContext& ctx) noexcept {
    double total = 0.0;
    for (const auto& m : ctx.members()) total += m.sma.value() * m.gi.value() * m.siga.value();
    return total / static_cast<double>(ctx.size());
}

AlignedAbility aligned_ability(SociallyMindedAbility ability, SharedSocialIdentity self_overlap,
                               GoalAlignment goal_overlap) noexcept {
    // |product| <= 1 for in-range factors, so construction cannot throw.
    return AlignedAbility(ability.value() * self_overlap.value() * goal_overlap.value());
}

double ismi_via_aligned_abilities(const IndividualContext& ctx) noexcept {
    double total = 0.0;
    for (const auto& c : ctx.contributors) {
        total += aligned_ability(ctx.target_sma, c.ssi, c.ga).value();
    }
    return total;
}

double gsmi_via_aligned_abilities(const GroupContext& ctx) noexcept {
    double total = 0.0;
    for (const auto& m : ctx.members()) {
        total += aligned_ability(m.sma, SharedSocialIdentity(m.gi.value()),
                                 GoalAlignment(m.siga.value()))
                     .value();
    }
    return total / static_cast<double>(ctx.size());
}

double homogeneous_sr_approximation(double total_ssi, double mean_ga) {
    if (!(total_ssi >= 0.0) || !std::isfinite(total_ssi)) {
        throw Error(ErrorKind::Range, "total SSI must be finite and >= 0, got " + std::to_string(total_ssi));
    }
    GoalAlignment checked(mean_ga);
    return total_ssi * checked.value();
}

}  // namespace smi
