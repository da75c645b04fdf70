#include "smi/episode.hpp"

#include <algorithm>
#include <sstream>

#include "smi/error.hpp"

namespace smi {

using nlohmann::json;

TickRecord record_tick(const WorldState& previous, const WorldState& world) {
    TickRecord rec;
    rec.tick = world.tick;
    const auto metrics = derive_context_metrics(world);
    const auto members = metrics.group.members();
    for (std::size_t i = 0; i < world.agents.size(); ++i) {
        const auto& a = world.agents[i];
        AgentTick t;
        t.id = a.id;
        t.position = a.position;
        t.structure = a.self_def.structure.id;
        t.level = a.self_def.level_tag;
        t.salience = a.self_def.salience;
        t.action = a.last_action;
        t.reward = a.last_reward;
        t.goal_progress = a.goal_progress;
        for (const auto& c : metrics.individual[i].contributors) t.contributors.emplace_back(c.ssi.value(), c.ga.value());
        t.ismi = ismi(metrics.individual[i]);
        t.sma = members[i].sma.value();
        t.gi = members[i].gi.value();
        t.siga = members[i].siga.value();
        rec.agents.push_back(std::move(t));
    }
    for (std::size_t s = 0; s < world.sites.size(); ++s) {
        if (world.sites[s].completed && !previous.sites[s].completed) rec.completed_sites.push_back(world.sites[s].spec.id);
    }
    rec.gsmi = gsmi(metrics.group);
    rec.group_attainment = goal_attainment(group_goal(world), world.sites);
    return rec;
}

EpisodeLog run_episode(const ScenarioConfig& scenario, std::uint64_t seed, const RunOptions& options) {
    EpisodeLog log;
    log.seed = seed;
    log.config_digest = config_digest(scenario);
    log.scenario = scenario.name;
    log.horizon = scenario.horizon;

    WorldState world = make_world(scenario, seed);
    for (const auto& a : world.agents) {
        log.agent_ids.push_back(a.id);
        log.policies.push_back(a.policy);
        log.initial_positions.push_back(a.position);
    }
    for (int t = 0; t < scenario.horizon; ++t) {
        WorldState next = step(world, StepOptions{options.threads});
        log.ticks.push_back(record_tick(world, next));
        world = std::move(next);
    }

    EpisodeSummary summary;
    for (const auto& a : world.agents) {
        summary.agents.push_back({a.id, a.policy, a.goal_progress, a.total_reward});
        summary.total_reward += a.total_reward;
    }
    summary.group_attainment = goal_attainment(group_goal(world), world.sites);
    for (const auto& s : world.sites)
        if (s.completed) summary.completed_sites.push_back(s.spec.id);
    log.summary = std::move(summary);
    return log;
}

namespace {

json pos_json(GridPos p) { return json::array({p.x, p.y}); }

GridPos pos_from(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

PolicyKind policy_from(const json& j) {
    auto k = parse_policy(j.get<std::string>());
    if (!k) throw Error(ErrorKind::Parse, "unknown policy '" + j.get<std::string>() + "'");
    return *k;
}

LevelTag level_from(const std::string& s) {
    for (auto t : {LevelTag::Individual, LevelTag::Subgroup, LevelTag::Group})
        if (to_string(t) == s) return t;
    throw Error(ErrorKind::Parse, "unknown level tag '" + s + "'");
}

}  // namespace

std::string to_jsonl(const EpisodeLog& log) {
    std::ostringstream out;
    json header{{"type", "header"},         {"seed", log.seed},       {"config_digest", log.config_digest},
                {"scenario", log.scenario}, {"horizon", log.horizon}, {"agents", log.agent_ids}};
    json policies = json::array();
    for (auto p : log.policies) policies.push_back(std::string(to_string(p)));
    header["policies"] = policies;
    json starts = json::array();
    for (auto p : log.initial_positions) starts.push_back(pos_json(p));
    header["initial_positions"] = starts;
    out << header.dump() << '\n';

    for (const auto& t : log.ticks) {
        json agents = json::array();
        for (const auto& a : t.agents) {
            json contributors = json::array();
            for (auto [ssi, ga] : a.contributors) contributors.push_back({ssi, ga});
            agents.push_back({{"id", a.id},
                              {"position", pos_json(a.position)},
                              {"structure", a.structure},
                              {"level", std::string(to_string(a.level))},
                              {"salience", a.salience},
                              {"action", std::string(to_string(a.action))},
                              {"reward", a.reward},
                              {"goal_progress", a.goal_progress},
                              {"contributors", contributors},
                              {"ismi", a.ismi},
                              {"sma", a.sma},
                              {"gi", a.gi},
                              {"siga", a.siga}});
        }
        json rec{{"type", "tick"},
                 {"tick", t.tick},
                 {"agents", agents},
                 {"completed_sites", t.completed_sites},
                 {"gsmi", t.gsmi},
                 {"group_attainment", t.group_attainment}};
        out << rec.dump() << '\n';
    }

    if (log.summary) {
        json agents = json::array();
        for (const auto& a : log.summary->agents) {
            agents.push_back({{"id", a.id},
                              {"policy", std::string(to_string(a.policy))},
                              {"goal_attainment", a.goal_attainment},
                              {"total_reward", a.total_reward}});
        }
        json s{{"type", "summary"},
               {"agents", agents},
               {"group_attainment", log.summary->group_attainment},
               {"total_reward", log.summary->total_reward},
               {"completed_sites", log.summary->completed_sites}};
        out << s.dump() << '\n';
    }
    return out.str();
}

EpisodeLog from_jsonl(const std::string& text) {
    EpisodeLog log;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            const auto type = j.at("type").get<std::string>();
            if (type == "header") {
                have_header = true;
                log.seed = j.at("seed").get<std::uint64_t>();
                log.config_digest = j.at("config_digest").get<std::string>();
                log.scenario = j.at("scenario").get<std::string>();
                log.horizon = j.at("horizon").get<int>();
                log.agent_ids = j.at("agents").get<std::vector<std::string>>();
                for (const auto& p : j.at("policies")) log.policies.push_back(policy_from(p));
                for (const auto& p : j.at("initial_positions")) log.initial_positions.push_back(pos_from(p));
            } else if (type == "tick") {
                TickRecord t;
                t.tick = j.at("tick").get<int>();
                t.completed_sites = j.at("completed_sites").get<std::vector<std::string>>();
                t.gsmi = j.at("gsmi").get<double>();
                t.group_attainment = j.at("group_attainment").get<double>();
                for (const auto& a : j.at("agents")) {
                    AgentTick at;
                    at.id = a.at("id").get<std::string>();
                    at.position = pos_from(a.at("position"));
                    at.structure = a.at("structure").get<std::string>();
                    at.level = level_from(a.at("level").get<std::string>());
                    at.salience = a.at("salience").get<double>();
                    auto act = parse_action(a.at("action").get<std::string>());
                    if (!act) throw Error(ErrorKind::Parse, "unknown action");
                    at.action = *act;
                    at.reward = a.at("reward").get<double>();
                    at.goal_progress = a.at("goal_progress").get<double>();
                    for (const auto& c : a.at("contributors"))
                        at.contributors.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
                    at.ismi = a.at("ismi").get<double>();
                    at.sma = a.at("sma").get<double>();
                    at.gi = a.at("gi").get<double>();
                    at.siga = a.at("siga").get<double>();
                    t.agents.push_back(std::move(at));
                }
                log.ticks.push_back(std::move(t));
            } else if (type == "summary") {
                EpisodeSummary s;
                for (const auto& a : j.at("agents")) {
                    s.agents.push_back({a.at("id").get<std::string>(), policy_from(a.at("policy")),
                                        a.at("goal_attainment").get<double>(), a.at("total_reward").get<double>()});
                }
                s.group_attainment = j.at("group_attainment").get<double>();
                s.total_reward = j.at("total_reward").get<double>();
                s.completed_sites = j.at("completed_sites").get<std::vector<std::string>>();
                log.summary = std::move(s);
            } else {
                throw Error(ErrorKind::Parse, "unknown record type '" + type + "'");
            }
        } catch (const json::exception& e) {
            throw Error(ErrorKind::Parse, "episode log line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!have_header) throw Error(ErrorKind::IncompleteLog, "episode log has no header line");
    return log;
}

std::string trajectory_digest(const EpisodeLog& log) {
    json j = json::array();
    for (auto p : log.initial_positions) j.push_back(pos_json(p));
    for (const auto& t : log.ticks) {
        json row = json::array();
        for (const auto& a : t.agents) {
            row.push_back({a.id, pos_json(a.position), std::string(to_string(a.action)), a.reward});
        }
        j.push_back(row);
    }
    return j.dump();
}

MetricsReport evaluate(const EpisodeLog& log) {
    if (!log.summary) throw Error(ErrorKind::IncompleteLog, "episode log has no summary record");
    if (static_cast<int>(log.ticks.size()) != log.horizon) {
        throw Error(ErrorKind::IncompleteLog, "episode log has " + std::to_string(log.ticks.size()) +
                                                  " tick records, horizon is " + std::to_string(log.horizon));
    }
    MetricsReport r;
    r.scenario = log.scenario;
    r.seed = log.seed;
    r.ticks = static_cast<int>(log.ticks.size());
    r.group_attainment = log.summary->group_attainment;
    r.completed_sites = log.summary->completed_sites;

    for (std::size_t i = 0; i < log.summary->agents.size(); ++i) {
        const auto& outcome = log.summary->agents[i];
        AgentReport a;
        a.id = outcome.id;
        a.policy = outcome.policy;
        a.goal_attainment = outcome.goal_attainment;
        a.total_reward = outcome.total_reward;
        double sum = 0.0;
        for (const auto& t : log.ticks) {
            if (i >= t.agents.size() || t.agents[i].id != outcome.id) {
                throw Error(ErrorKind::IncompleteLog, "tick " + std::to_string(t.tick) + " lacks agent " + outcome.id);
            }
            sum += t.agents[i].ismi;
            if (!a.ticks_to_goal && t.agents[i].goal_progress >= 1.0) a.ticks_to_goal = t.tick;
        }
        if (!log.ticks.empty()) {
            a.mean_ismi = sum / static_cast<double>(log.ticks.size());
            a.final_ismi = log.ticks.back().agents[i].ismi;
        }
        r.agents.push_back(std::move(a));
    }

    double gsum = 0.0;
    for (const auto& t : log.ticks) gsum += t.gsmi;
    if (!log.ticks.empty()) {
        r.mean_gsmi = gsum / static_cast<double>(log.ticks.size());
        r.final_gsmi = log.ticks.back().gsmi;
    }

    std::map<std::string, std::pair<double, int>> by_policy;
    for (const auto& a : r.agents) {
        auto& [total, count] = by_policy[std::string(to_string(a.policy))];
        total += a.goal_attainment;
        ++count;
    }
    for (const auto& [policy, tc] : by_policy) r.policy_attainment[policy] = tc.first / tc.second;
    return r;
}

json to_json(const MetricsReport& r) {
    json agents = json::array();
    for (const auto& a : r.agents) {
        agents.push_back({{"id", a.id},
                          {"policy", std::string(to_string(a.policy))},
                          {"mean_ismi", a.mean_ismi},
                          {"final_ismi", a.final_ismi},
                          {"goal_attainment", a.goal_attainment},
                          {"ticks_to_goal", a.ticks_to_goal ? json(*a.ticks_to_goal) : json(nullptr)},
                          {"total_reward", a.total_reward}});
    }
    return {{"scenario", r.scenario},
            {"seed", r.seed},
            {"ticks", r.ticks},
            {"agents", agents},
            {"mean_gsmi", r.mean_gsmi},
            {"final_gsmi", r.final_gsmi},
            {"group_attainment", r.group_attainment},
            {"policy_attainment", r.policy_attainment},
            {"completed_sites", r.completed_sites}};
}

}  // namespace smi
