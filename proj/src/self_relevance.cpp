#include "smi/self_relevance.hpp"

#include <algorithm>
#include <cmath>

#include "smi/error.hpp"

namespace smi {

std::string_view to_string(LevelTag tag) noexcept {
    switch (tag) {
        case LevelTag::Individual: return "individual";
        case LevelTag::Subgroup: return "subgroup";
        case LevelTag::Group: return "group";
    }
    return "?";
}

PerceiverReadiness::PerceiverReadiness(double individual, double subgroup, double group)
    : individual_(individual), subgroup_(subgroup), group_(group) {
    for (double p : {individual, subgroup, group}) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw Error(ErrorKind::Range, "readiness priors must be finite and >= 0");
    }
    if (individual + subgroup + group <= 0.0) {
        throw Error(ErrorKind::Range, "at least one readiness prior must be > 0");
    }
}

double PerceiverReadiness::prior(LevelTag tag) const noexcept {
    switch (tag) {
        case LevelTag::Individual: return individual_;
        case LevelTag::Subgroup: return subgroup_;
        case LevelTag::Group: return group_;
    }
    return 0.0;
}

SelfDefinition SelfDefinition::individual(const AgentId& agent) {
    return {agent, AgenticStructure::from_members({agent}), 1.0, LevelTag::Individual};
}

LevelTag level_tag_for(const AgenticStructure& structure, std::size_t present_count) noexcept {
    if (structure.size() <= 1) return LevelTag::Individual;
    if (structure.size() == present_count) return LevelTag::Group;
    return LevelTag::Subgroup;
}

double normative_fit(const AgenticStructure& structure, const AgentFeatureMatrix& features,
                     const NormPrototypes& prototypes) {
    auto it = prototypes.by_structure.find(structure.id);
    if (it == prototypes.by_structure.end()) return 1.0;
    const auto& proto = it->second;
    if (proto.size() != features.dimension()) {
        throw Error(ErrorKind::DimensionMismatch, "prototype for '" + structure.id + "' has dimension " +
                                                      std::to_string(proto.size()) + ", features have " +
                                                      std::to_string(features.dimension()));
    }
    double total = 0.0;
    for (const auto& m : structure.members) {
        auto idx = features.index_of(m);
        if (!idx) throw Error(ErrorKind::MissingAgent, "structure member '" + m + "' has no features");
        total += euclidean(features.row(*idx), proto);
    }
    const double scale = prototypes.scale > 0 ? prototypes.scale : 1.0;
    return std::exp(-(total / static_cast<double>(structure.size())) / scale);
}

namespace {

constexpr double kSingletonFit = 0.5;

// Fit of the lowest retained level holding exactly this structure.
std::optional<MetaContrastScore> level_fit(const AgenticStructure& structure, const SocialLandscape& landscape) {
    for (const auto& level : landscape.levels()) {
        for (const auto& s : level.structures)
            if (s.id == structure.id) return level.fit;
    }
    return std::nullopt;
}

}  // namespace

SalienceScore structure_salience(const AgentId& target, const AgenticStructure& structure,
                                 const SocialLandscape& landscape, const AgentFeatureMatrix& features,
                                 const PerceiverReadiness& readiness, const NormPrototypes& prototypes) {
    if (!structure.contains(target)) {
        throw Error(ErrorKind::NotAMember, "agent '" + target + "' is not a member of '" + structure.id + "'");
    }
    const auto fit = level_fit(structure, landscape);
    if (!fit) throw Error(ErrorKind::NoCandidates, "structure '" + structure.id + "' is not in the landscape");

    const LevelTag tag = level_tag_for(structure, landscape.agents().size());
    const double comparative = tag == LevelTag::Individual ? kSingletonFit : fit->squashed();
    const double value = comparative * normative_fit(structure, features, prototypes) * readiness.prior(tag);
    return {structure, tag, value};
}

std::vector<SalienceScore> candidate_saliences(const AgentId& target, const SocialLandscape& landscape,
                                               const AgentFeatureMatrix& features,
                                               const PerceiverReadiness& readiness,
                                               const NormPrototypes& prototypes) {
    std::vector<SalienceScore> out;
    for (std::size_t l = 0; l < landscape.levels().size(); ++l) {
        const auto* s = landscape.structure_of(l, target);
        if (!s) continue;
        const bool seen =
            std::any_of(out.begin(), out.end(), [&](const SalienceScore& c) { return c.structure.id == s->id; });
        if (!seen) out.push_back(structure_salience(target, *s, landscape, features, readiness, prototypes));
    }
    return out;
}

SelfDefinition select_self_defining(const AgentId& target, const SocialLandscape& landscape,
                                    const AgentFeatureMatrix& features, const PerceiverReadiness& readiness,
                                    const NormPrototypes& prototypes) {
    if (!landscape.covers(target)) {
        throw Error(ErrorKind::NoCandidates, "landscape does not cover agent '" + target + "'");
    }
    auto candidates = candidate_saliences(target, landscape, features, readiness, prototypes);
    if (candidates.empty()) throw Error(ErrorKind::NoCandidates, "no structure contains agent '" + target + "'");

    // Strict > keeps the lowest level on ties; candidates are already level-ordered,
    // and structure ids break ties within a level.
    std::size_t best = 0;
    double total = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        total += candidates[i].value;
        const auto& c = candidates[i];
        const auto& b = candidates[best];
        if (c.value > b.value || (c.value == b.value && c.tag == b.tag && c.structure.id < b.structure.id)) best = i;
    }
    const double salience = total > 0.0 ? candidates[best].value / total : 1.0 / static_cast<double>(candidates.size());
    return {target, candidates[best].structure, salience, candidates[best].tag};
}

}  // namespace smi
