#pragma once

// Self-relevance: which candidate structure is self-defining for an agent.
//
// raw salience = squash(comparative fit) * normative fit * readiness prior.
// Singleton structures take the neutral comparative fit 0.5.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smi/landscape.hpp"

namespace smi {

enum class LevelTag { Individual, Subgroup, Group };

std::string_view to_string(LevelTag tag) noexcept;

class PerceiverReadiness {
public:
    PerceiverReadiness(double individual, double subgroup, double group);
    static PerceiverReadiness uniform() { return {1.0, 1.0, 1.0}; }

    double individual() const noexcept { return individual_; }
    double subgroup() const noexcept { return subgroup_; }
    double group() const noexcept { return group_; }
    double prior(LevelTag tag) const noexcept;

private:
    double individual_;
    double subgroup_;
    double group_;
};

/// Expected feature vectors keyed by structure id; `scale` sets the distance unit.
struct NormPrototypes {
    std::map<std::string, std::vector<double>> by_structure;
    double scale = 1.0;
};

struct SalienceScore {
    AgenticStructure structure;
    LevelTag tag;
    double value;
};

struct SelfDefinition {
    AgentId agent;
    AgenticStructure structure;
    double salience;  // normalized over the agent's candidates, in [0, 1]
    LevelTag level_tag;

    static SelfDefinition individual(const AgentId& agent);
    bool is_individual() const noexcept { return level_tag == LevelTag::Individual; }
};

/// individual for singletons, group when the structure spans every present agent.
LevelTag level_tag_for(const AgenticStructure& structure, std::size_t present_count) noexcept;

double normative_fit(const AgenticStructure& structure, const AgentFeatureMatrix& features,
                     const NormPrototypes& prototypes);

SalienceScore structure_salience(const AgentId& target, const AgenticStructure& structure,
                                 const SocialLandscape& landscape, const AgentFeatureMatrix& features,
                                 const PerceiverReadiness& readiness, const NormPrototypes& prototypes);

/// Every distinct structure containing `target` across retained levels, lowest level first.
std::vector<SalienceScore> candidate_saliences(const AgentId& target, const SocialLandscape& landscape,
                                               const AgentFeatureMatrix& features,
                                               const PerceiverReadiness& readiness,
                                               const NormPrototypes& prototypes);

SelfDefinition select_self_defining(const AgentId& target, const SocialLandscape& landscape,
                                    const AgentFeatureMatrix& features, const PerceiverReadiness& readiness,
                                    const NormPrototypes& prototypes);

}  // namespace smi
