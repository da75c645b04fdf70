#pragma once

// Episode execution, logging and evaluation.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "smi/world.hpp"

namespace smi {

struct AgentTick {
    AgentId id;
    GridPos position;
    std::string structure;
    LevelTag level = LevelTag::Individual;
    double salience = 1.0;
    Action action = Action::Stay;
    double reward = 0.0;
    double goal_progress = 0.0;
    std::vector<std::pair<double, double>> contributors;  // (SSI, GA) per other agent, agent order
    double ismi = 0.0;
    double sma = 0.0;
    double gi = 0.0;
    double siga = 0.0;
};

struct TickRecord {
    int tick = 0;
    std::vector<AgentTick> agents;
    std::vector<std::string> completed_sites;  // completed during this tick
    double gsmi = 0.0;
    double group_attainment = 0.0;
};

struct AgentOutcome {
    AgentId id;
    PolicyKind policy = PolicyKind::SociallyMinded;
    double goal_attainment = 0.0;
    double total_reward = 0.0;
};

struct EpisodeSummary {
    std::vector<AgentOutcome> agents;
    double group_attainment = 0.0;
    double total_reward = 0.0;
    std::vector<std::string> completed_sites;
};

struct EpisodeLog {
    std::uint64_t seed = 0;
    std::string config_digest;
    std::string scenario;
    int horizon = 0;
    std::vector<AgentId> agent_ids;
    std::vector<PolicyKind> policies;
    std::vector<GridPos> initial_positions;
    std::vector<TickRecord> ticks;
    std::optional<EpisodeSummary> summary;
};

struct RunOptions {
    unsigned threads = 1;
};

/// Throws ConfigInvalid when the scenario does not validate.
EpisodeLog run_episode(const ScenarioConfig& scenario, std::uint64_t seed, const RunOptions& options = {});

/// Tick record for `world`, which has just been stepped from `previous`.
TickRecord record_tick(const WorldState& previous, const WorldState& world);

/// Line-delimited JSON: a header line, one line per tick, a summary line.
std::string to_jsonl(const EpisodeLog& log);
EpisodeLog from_jsonl(const std::string& text);

/// Positions, actions and rewards only; used to compare trajectories across policies.
std::string trajectory_digest(const EpisodeLog& log);

struct AgentReport {
    AgentId id;
    PolicyKind policy = PolicyKind::SociallyMinded;
    double mean_ismi = 0.0;
    double final_ismi = 0.0;
    double goal_attainment = 0.0;
    std::optional<int> ticks_to_goal;
    double total_reward = 0.0;
};

struct MetricsReport {
    std::string scenario;
    std::uint64_t seed = 0;
    int ticks = 0;
    std::vector<AgentReport> agents;
    double mean_gsmi = 0.0;
    double final_gsmi = 0.0;
    double group_attainment = 0.0;
    std::map<std::string, double> policy_attainment;  // mean attainment per policy present
    std::vector<std::string> completed_sites;
};

/// Throws IncompleteLog when ticks are missing or the summary is absent.
MetricsReport evaluate(const EpisodeLog& log);

nlohmann::json to_json(const MetricsReport& report);

}  // namespace smi
