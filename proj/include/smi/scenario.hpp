#pragma once

// Scenario configuration: grid, roster, task sites and model parameters.
// Loaded from JSON; every violation is reported with its field path.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "smi/landscape.hpp"
#include "smi/self_relevance.hpp"

namespace smi {

enum class PolicyKind { SociallyMinded, PureIndividual, FixedCollective };
enum class SiteKind { Solo, Subgroup, Collective };

std::string_view to_string(PolicyKind kind) noexcept;
std::string_view to_string(SiteKind kind) noexcept;
std::optional<PolicyKind> parse_policy(std::string_view name) noexcept;

/// Scripted belief about one site; unset fields fall back to the truth.
struct SitePercept {
    std::optional<GridPos> position;
    std::optional<double> value;
};

struct AgentSpec {
    AgentId id;
    PolicyKind policy = PolicyKind::SociallyMinded;
    double sma = 0.5;
    PerceiverReadiness readiness = PerceiverReadiness::uniform();
    std::vector<double> goal;  // one weight per site
    GridPos start;
    int spawn_radius = 0;
    std::map<std::size_t, SitePercept> percepts;  // keyed by site index
};

struct SiteSpec {
    std::string id;
    GridPos position;
    SiteKind kind = SiteKind::Solo;
    int required_agents = 1;  // resolved: 1 for solo, N for collective
    double reward = 1.0;
};

struct ScenarioConfig {
    std::string name = "scenario";
    int width = 10;
    int height = 10;
    int horizon = 50;
    std::vector<AgentSpec> agents;
    std::vector<SiteSpec> sites;
    LandscapeParams landscape;
    FeatureWeights feature_weights;
    int action_window = 8;
    double distance_cost = 0.1;
    double percept_noise = 0.0;
    NormPrototypes prototypes;
    std::string log_file = "episode.jsonl";
    std::string summary_file = "summary.json";
};

/// Throws ConfigInvalid naming the offending field path.
ScenarioConfig parse_scenario(const nlohmann::json& doc);
ScenarioConfig load_scenario(const std::filesystem::path& path);
void validate_scenario(const ScenarioConfig& config);

nlohmann::json to_json(const ScenarioConfig& config);
/// FNV-1a over the canonical JSON form, hex encoded.
std::string config_digest(const ScenarioConfig& config);

/// Copy with every agent's policy replaced.
ScenarioConfig with_policy(ScenarioConfig config, PolicyKind policy);
/// Copy with `count` agents, cycling through the roster for extra agents.
ScenarioConfig with_agent_count(ScenarioConfig config, std::size_t count);

}  // namespace smi
