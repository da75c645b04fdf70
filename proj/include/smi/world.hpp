#pragma once

// Grid world state and the per-tick agent loop.

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "smi/influence.hpp"
#include "smi/metrics.hpp"
#include "smi/scenario.hpp"

namespace smi {

enum class Action : std::uint8_t { Stay, North, East, South, West, Interact };
inline constexpr std::size_t kActionCount = 6;
inline constexpr std::array<Action, kActionCount> kActions{Action::Stay,  Action::North, Action::East,
                                                           Action::South, Action::West,  Action::Interact};

std::string_view to_string(Action a) noexcept;
std::optional<Action> parse_action(std::string_view name) noexcept;

struct Site {
    SiteSpec spec;
    bool completed = false;
};

struct AgentState {
    AgentId id;
    GridPos position;
    std::vector<double> goal;
    SociallyMindedAbility sma;
    PerceiverReadiness readiness = PerceiverReadiness::uniform();
    PolicyKind policy = PolicyKind::SociallyMinded;
    double goal_progress = 0.0;
    std::map<std::size_t, SitePercept> scripted;
    std::optional<std::size_t> task;  // site pursued last tick
    std::deque<Action> recent;        // newest last, bounded by the action window
    SelfDefinition self_def = SelfDefinition::individual(id);
    Action last_action = Action::Stay;
    double last_reward = 0.0;
    double total_reward = 0.0;
};

struct WorldParams {
    LandscapeParams landscape;
    FeatureWeights feature_weights;
    std::size_t action_window = 8;
    double distance_cost = 0.1;
    double percept_noise = 0.0;
    NormPrototypes prototypes;
};

struct WorldState {
    int tick = 0;
    int width = 1;
    int height = 1;
    std::vector<Site> sites;
    std::vector<AgentState> agents;
    WorldParams params;
    std::mt19937_64 rng;

    std::vector<AgentId> agent_ids() const;
    const AgentState* find(const AgentId& id) const;
    std::optional<std::size_t> site_at(GridPos p) const;
};

/// Seeded initial world: spawn positions are drawn inside each agent's spawn box.
WorldState make_world(const ScenarioConfig& config, std::uint64_t seed);

/// Fraction of positive goal weight whose sites are complete.
double goal_attainment(std::span<const double> goal, const std::vector<Site>& sites);
std::vector<double> group_goal(const WorldState& world);

/// Cosine similarity clamped to [-1, 1]; 0 when either vector is zero.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct ContextMetrics {
    std::vector<IndividualContext> individual;  // per agent, contributors in agent order (self skipped)
    GroupContext group;
};

ContextMetrics derive_context_metrics(const WorldState& world);

struct StepOptions {
    unsigned threads = 1;  // 0 means hardware concurrency
};

WorldState step(const WorldState& world, const StepOptions& options = {});

// Exposed for tests and diagnostics.
AgentFeatureMatrix world_features(const WorldState& world);
Observation perceive(const WorldState& world, std::size_t agent, std::span<const double> noise);

struct Plan {
    std::optional<std::size_t> site;
    GridPos target;
    bool ready = true;  // structure members assembled at the target
};

ActionScores score_actions(const Plan& plan, GridPos from, const WorldState& world);

}  // namespace smi
