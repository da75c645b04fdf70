#pragma once

// Social landscape modelling: which groups does an observer see?
//
// Candidate partitions come from a single-linkage merge tree over agent
// features; each cut is scored by meta-contrast (mean between-category
// distance over mean within-category distance). The retained landscape is
// parsimonious: all singletons, the best-fitting intermediate cut when it
// clears the fit threshold, and the whole group.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace smi {

using AgentId = std::string;

struct GridPos {
    int x = 0;
    int y = 0;
    friend constexpr bool operator==(GridPos, GridPos) = default;
};

/// Per-agent observable record, the raw input to feature extraction.
struct AgentObservation {
    AgentId id;
    GridPos position;
    std::optional<std::size_t> task;    // index of the task currently pursued
    std::vector<double> action_counts;  // recent-action histogram, one bin per action
};

struct FeatureWeights {
    double position = 1.0;
    double task = 1.0;
    double actions = 0.5;
};

struct FeatureSchema {
    std::size_t task_count = 0;
    std::size_t action_bins = 0;
    double position_scale = 1.0;  // positions are divided by this before weighting
    FeatureWeights weights;

    std::size_t dimension() const noexcept { return 2 + task_count + action_bins; }
};

class AgentFeatureMatrix {
public:
    AgentFeatureMatrix(std::vector<AgentId> agent_ids, std::vector<std::vector<double>> features);

    std::size_t size() const noexcept { return ids_.size(); }
    std::size_t dimension() const noexcept { return dim_; }
    const std::vector<AgentId>& agent_ids() const noexcept { return ids_; }
    std::span<const double> row(std::size_t i) const { return rows_.at(i); }
    std::optional<std::size_t> index_of(const AgentId& id) const;

    AgentFeatureMatrix scaled(double k) const;

private:
    std::vector<AgentId> ids_;
    std::vector<std::vector<double>> rows_;
    std::size_t dim_ = 0;
};

/// Feature rows for `present`, in that order. Throws MissingAgent.
AgentFeatureMatrix extract_features(std::span<const AgentId> present,
                                    std::span<const AgentObservation> world_view,
                                    const FeatureSchema& schema);

double euclidean(std::span<const double> a, std::span<const double> b);

/// Non-negative comparative-fit score; infinity is the MAX sentinel used when
/// within-category spread is zero but categories differ.
class MetaContrastScore {
public:
    constexpr MetaContrastScore() = default;
    explicit MetaContrastScore(double v);

    static constexpr MetaContrastScore max() noexcept {
        MetaContrastScore s;
        s.value_ = std::numeric_limits<double>::infinity();
        return s;
    }
    static constexpr MetaContrastScore neutral() noexcept {
        MetaContrastScore s;
        s.value_ = 1.0;
        return s;
    }

    constexpr double value() const noexcept { return value_; }
    constexpr bool is_max() const noexcept { return value_ == std::numeric_limits<double>::infinity(); }
    /// s / (1 + s), with MAX mapped to 1.
    double squashed() const noexcept;

    friend constexpr auto operator<=>(MetaContrastScore a, MetaContrastScore b) { return a.value_ <=> b.value_; }
    friend constexpr bool operator==(MetaContrastScore, MetaContrastScore) = default;

private:
    double value_ = 1.0;
};

struct AgenticStructure {
    std::string id;                // member ids joined by '+', stable across calls
    std::vector<AgentId> members;  // sorted, non-empty

    static AgenticStructure from_members(std::vector<AgentId> members);
    bool contains(const AgentId& agent) const;
    std::size_t size() const noexcept { return members.size(); }
    friend bool operator==(const AgenticStructure&, const AgenticStructure&) = default;
};

using Partition = std::vector<AgenticStructure>;

/// Throws InvalidPartition when the partition does not cover `features` exactly once.
MetaContrastScore meta_contrast_ratio(const Partition& partition, const AgentFeatureMatrix& features);

/// Every cut of the single-linkage merge tree, finest (all singletons) first.
std::vector<Partition> merge_tree_cuts(const AgentFeatureMatrix& features);

enum class LevelKind { Singletons, Subgroups, WholeGroup };

struct LandscapeLevel {
    LevelKind kind;
    Partition structures;
    MetaContrastScore fit;
};

struct LandscapeParams {
    double fit_threshold = 2.0;
};

class SocialLandscape {
public:
    SocialLandscape(AgentId observer, std::vector<AgentId> agents, std::vector<LandscapeLevel> levels);

    const AgentId& observer() const noexcept { return observer_; }
    const std::vector<AgentId>& agents() const noexcept { return agents_; }
    const std::vector<LandscapeLevel>& levels() const noexcept { return levels_; }

    bool covers(const AgentId& agent) const;
    /// Structure containing `agent` at `level`; nullptr when the agent is absent.
    const AgenticStructure* structure_of(std::size_t level, const AgentId& agent) const;
    /// Members of the structure with `structure_id`, searched across levels.
    std::optional<std::vector<AgentId>> members_of(const std::string& structure_id) const;
    std::optional<LandscapeLevel> subgroup_level() const;

private:
    AgentId observer_;
    std::vector<AgentId> agents_;
    std::vector<LandscapeLevel> levels_;
};

SocialLandscape build_social_landscape(const AgentId& observer, const AgentFeatureMatrix& features,
                                       const LandscapeParams& params = {});

}  // namespace smi
