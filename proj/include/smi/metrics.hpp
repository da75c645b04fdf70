#pragma once

// Individual and group socially-minded intelligence.
//
// ISMI  = SMA_p * sum_q(SSI_pq * GA_pq)
// GSMI  = sum_m(SMA_m * GI_m * SIGA_m) / N_m
// AA    = ability * self_overlap * goal_overlap
//
// All sums run left to right over the stored order, so the aligned-ability
// forms are bit-identical to the direct forms.

#include <span>
#include <vector>

namespace smi {

namespace detail {

template <typename Tag, int Lo>
class Bounded {
public:
    static constexpr double lower = Lo;
    static constexpr double upper = 1.0;

    constexpr Bounded() = default;
    explicit Bounded(double v);

    constexpr double value() const noexcept { return value_; }
    friend constexpr bool operator==(Bounded, Bounded) = default;

private:
    double value_ = 0.0;
};

}  // namespace detail

struct SmaTag;
struct SsiTag;
struct GaTag;
struct GiTag;
struct SigaTag;
struct AaTag;

/// Socially-minded ability, [0, 1].
using SociallyMindedAbility = detail::Bounded<SmaTag, 0>;
/// Shared social identity (or any two-way self-overlap), [0, 1].
using SharedSocialIdentity = detail::Bounded<SsiTag, 0>;
/// Goal alignment (or any goal-overlap), [-1, 1].
using GoalAlignment = detail::Bounded<GaTag, -1>;
/// One-way identification of a member with the group, [0, 1].
using GroupIdentification = detail::Bounded<GiTag, 0>;
/// Alignment of a member's salient identity goals with the group's, [-1, 1].
using SalientIdentityGoalAlignment = detail::Bounded<SigaTag, -1>;
using AlignedAbility = detail::Bounded<AaTag, -1>;

struct Contributor {
    SharedSocialIdentity ssi;
    GoalAlignment ga;
};

struct IndividualContext {
    SociallyMindedAbility target_sma;
    std::vector<Contributor> contributors;
};

struct GroupMember {
    SociallyMindedAbility sma;
    GroupIdentification gi;
    SalientIdentityGoalAlignment siga;
};

/// Non-empty list of group members; an empty list throws EmptyGroup.
class GroupContext {
public:
    explicit GroupContext(std::vector<GroupMember> members);

    std::span<const GroupMember> members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }

private:
    std::vector<GroupMember> members_;
};

double social_resource(const IndividualContext& ctx) noexcept;
double ismi(const IndividualContext& ctx) noexcept;
double gsmi(const GroupContext& ctx) noexcept;

AlignedAbility aligned_ability(SociallyMindedAbility ability, SharedSocialIdentity self_overlap,
                               GoalAlignment goal_overlap) noexcept;

double ismi_via_aligned_abilities(const IndividualContext& ctx) noexcept;
double gsmi_via_aligned_abilities(const GroupContext& ctx) noexcept;

/// total SSI times mean GA; exact only when every contributor is identical.
double homogeneous_sr_approximation(double total_ssi, double mean_ga);

}  // namespace smi
