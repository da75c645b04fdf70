#include "smi/world.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "smi/error.hpp"

namespace smi {

std::string_view to_string(Action a) noexcept {
    switch (a) {
        case Action::Stay: return "stay";
        case Action::North: return "north";
        case Action::East: return "east";
        case Action::South: return "south";
        case Action::West: return "west";
        case Action::Interact: return "interact";
    }
    return "?";
}

std::optional<Action> parse_action(std::string_view name) noexcept {
    for (auto a : kActions)
        if (to_string(a) == name) return a;
    return std::nullopt;
}

std::vector<AgentId> WorldState::agent_ids() const {
    std::vector<AgentId> ids;
    ids.reserve(agents.size());
    for (const auto& a : agents) ids.push_back(a.id);
    return ids;
}

const AgentState* WorldState::find(const AgentId& id) const {
    for (const auto& a : agents)
        if (a.id == id) return &a;
    return nullptr;
}

std::optional<std::size_t> WorldState::site_at(GridPos p) const {
    for (std::size_t s = 0; s < sites.size(); ++s)
        if (sites[s].spec.position == p) return s;
    return std::nullopt;
}

namespace {

int manhattan(GridPos a, GridPos b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

GridPos clamp_to(GridPos p, int width, int height) {
    return {std::clamp(p.x, 0, width - 1), std::clamp(p.y, 0, height - 1)};
}

GridPos apply(Action a, GridPos p, int width, int height) {
    switch (a) {
        case Action::North: --p.y; break;
        case Action::South: ++p.y; break;
        case Action::East: ++p.x; break;
        case Action::West: --p.x; break;
        default: break;
    }
    return clamp_to(p, width, height);
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, n);
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += workers) fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

bool free_for_spawn(const WorldState& w, GridPos p) {
    if (w.site_at(p)) return false;
    return std::none_of(w.agents.begin(), w.agents.end(), [&](const AgentState& a) { return a.position == p; });
}

}  // namespace

WorldState make_world(const ScenarioConfig& config, std::uint64_t seed) {
    validate_scenario(config);
    WorldState w;
    w.width = config.width;
    w.height = config.height;
    w.rng.seed(seed);
    w.params.landscape = config.landscape;
    w.params.feature_weights = config.feature_weights;
    w.params.action_window = static_cast<std::size_t>(config.action_window);
    w.params.distance_cost = config.distance_cost;
    w.params.percept_noise = config.percept_noise;
    w.params.prototypes = config.prototypes;
    for (const auto& s : config.sites) w.sites.push_back({s, false});

    for (const auto& spec : config.agents) {
        AgentState a;
        a.id = spec.id;
        a.goal = spec.goal;
        a.sma = SociallyMindedAbility(spec.sma);
        a.readiness = spec.readiness;
        a.policy = spec.policy;
        a.scripted = spec.percepts;
        a.self_def = SelfDefinition::individual(spec.id);

        // Rejection-sample the spawn box, then fall back to the nearest free cell.
        std::optional<GridPos> chosen;
        const int r = spec.spawn_radius;
        if (r == 0) {
            if (free_for_spawn(w, spec.start)) chosen = spec.start;
        } else {
            std::uniform_int_distribution<int> offset(-r, r);
            for (int attempt = 0; attempt < 64 && !chosen; ++attempt) {
                GridPos p = clamp_to({spec.start.x + offset(w.rng), spec.start.y + offset(w.rng)}, w.width, w.height);
                if (free_for_spawn(w, p)) chosen = p;
            }
        }
        for (int radius = 1; !chosen && radius < w.width + w.height; ++radius) {
            for (int dy = -radius; dy <= radius && !chosen; ++dy) {
                for (int dx = -radius; dx <= radius && !chosen; ++dx) {
                    if (std::max(std::abs(dx), std::abs(dy)) != radius) continue;
                    GridPos p{spec.start.x + dx, spec.start.y + dy};
                    if (p.x < 0 || p.y < 0 || p.x >= w.width || p.y >= w.height) continue;
                    if (free_for_spawn(w, p)) chosen = p;
                }
            }
        }
        if (!chosen) throw Error(ErrorKind::ConfigInvalid, "agents: no free cell to spawn '" + spec.id + "'");
        a.position = *chosen;
        w.agents.push_back(std::move(a));
    }
    for (auto& a : w.agents) a.goal_progress = goal_attainment(a.goal, w.sites);
    return w;
}

double goal_attainment(std::span<const double> goal, const std::vector<Site>& sites) {
    double total = 0.0, done = 0.0;
    for (std::size_t s = 0; s < goal.size() && s < sites.size(); ++s) {
        if (goal[s] <= 0) continue;
        total += goal[s];
        if (sites[s].completed) done += goal[s];
    }
    return total > 0 ? done / total : 0.0;
}

std::vector<double> group_goal(const WorldState& world) {
    std::vector<double> mean(world.sites.size(), 0.0);
    if (world.agents.empty()) return mean;
    for (const auto& a : world.agents)
        for (std::size_t s = 0; s < mean.size(); ++s) mean[s] += a.goal[s];
    for (auto& v : mean) v /= static_cast<double>(world.agents.size());
    return mean;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

namespace {

std::vector<double> identity_goal(const WorldState& world, const AgentState& agent) {
    if (agent.self_def.is_individual()) return agent.goal;
    std::vector<double> mean(world.sites.size(), 0.0);
    std::size_t count = 0;
    for (const auto& m : agent.self_def.structure.members) {
        const auto* member = world.find(m);
        if (!member) continue;
        for (std::size_t s = 0; s < mean.size(); ++s) mean[s] += member->goal[s];
        ++count;
    }
    if (count > 0)
        for (auto& v : mean) v /= static_cast<double>(count);
    return mean;
}

}  // namespace

ContextMetrics derive_context_metrics(const WorldState& world) {
    std::vector<IndividualContext> individual;
    std::vector<GroupMember> members;
    const auto group = group_goal(world);
    for (const auto& p : world.agents) {
        IndividualContext ctx{p.sma, {}};
        const bool shared = p.self_def.structure.size() > 1;
        for (const auto& q : world.agents) {
            if (&q == &p) continue;
            const double ssi = shared && q.self_def.structure.id == p.self_def.structure.id ? p.self_def.salience : 0.0;
            ctx.contributors.push_back({SharedSocialIdentity(ssi), GoalAlignment(cosine_similarity(p.goal, q.goal))});
        }
        individual.push_back(std::move(ctx));

        const double gi = p.self_def.level_tag == LevelTag::Group ? p.self_def.salience : 0.0;
        members.push_back({p.sma, GroupIdentification(gi),
                           SalientIdentityGoalAlignment(cosine_similarity(identity_goal(world, p), group))});
    }
    return {std::move(individual), GroupContext(std::move(members))};
}

AgentFeatureMatrix world_features(const WorldState& world) {
    FeatureSchema schema;
    schema.task_count = world.sites.size();
    schema.action_bins = kActionCount;
    schema.position_scale = std::max(1, std::max(world.width, world.height) - 1);
    schema.weights = world.params.feature_weights;

    std::vector<AgentObservation> view;
    for (const auto& a : world.agents) {
        std::vector<double> counts(kActionCount, 0.0);
        for (auto act : a.recent) counts[static_cast<std::size_t>(act)] += 1.0;
        view.push_back({a.id, a.position, a.task, std::move(counts)});
    }
    const auto ids = world.agent_ids();
    return extract_features(ids, view, schema);
}

Observation perceive(const WorldState& world, std::size_t agent, std::span<const double> noise) {
    const auto& a = world.agents.at(agent);
    Observation o{a.id, {}, {}};
    o.values.reserve(world.sites.size() * 3);
    for (std::size_t s = 0; s < world.sites.size(); ++s) {
        const auto& site = world.sites[s];
        GridPos pos = site.spec.position;
        double value = a.goal[s] * site.spec.reward;
        if (auto it = a.scripted.find(s); it != a.scripted.end()) {
            if (it->second.position) pos = *it->second.position;
            if (it->second.value) value = *it->second.value;
        }
        if (site.completed) value = 0.0;
        else if (s < noise.size()) value += noise[s];
        o.values.push_back(pos.x);
        o.values.push_back(pos.y);
        o.values.push_back(value);
    }
    return o;
}

ActionScores score_actions(const Plan& plan, GridPos from, const WorldState& world) {
    ActionScores out{std::vector<double>(kActionCount, 0.0)};
    if (!plan.site) {
        for (std::size_t i = 0; i < kActionCount; ++i) out.scores[i] = kActions[i] == Action::Stay ? 0.0 : -1.0;
        return out;
    }
    const int d = manhattan(from, plan.target);
    for (std::size_t i = 0; i < kActionCount; ++i) {
        const Action a = kActions[i];
        if (a == Action::Interact) {
            // A structure engages only once all of its members have assembled.
            out.scores[i] = d == 0 ? (plan.ready ? 1.0 : -0.5) : -(d + 1.0);
        } else {
            out.scores[i] = -static_cast<double>(manhattan(apply(a, from, world.width, world.height), plan.target));
        }
    }
    return out;
}

namespace {

SelfDefinition self_definition_for(const WorldState& w, std::size_t i, const AgentFeatureMatrix& features) {
    const auto& a = w.agents[i];
    switch (a.policy) {
        case PolicyKind::PureIndividual: return SelfDefinition::individual(a.id);
        case PolicyKind::FixedCollective: {
            auto whole = AgenticStructure::from_members(w.agent_ids());
            const auto tag = level_tag_for(whole, w.agents.size());
            return {a.id, std::move(whole), 1.0, tag};
        }
        case PolicyKind::SociallyMinded: break;
    }
    const auto landscape = build_social_landscape(a.id, features, w.params.landscape);
    return select_self_defining(a.id, landscape, features, a.readiness, w.params.prototypes);
}

std::vector<std::size_t> structure_peers(const WorldState& w, std::size_t i, const SelfDefinition& def) {
    std::vector<std::size_t> peers;
    if (def.is_individual()) return peers;
    for (std::size_t q = 0; q < w.agents.size(); ++q)
        if (q != i && def.structure.contains(w.agents[q].id)) peers.push_back(q);
    return peers;
}

Plan make_plan(const WorldState& w, std::size_t i, const Observation& fused, const SelfDefinition& def,
               const std::vector<std::size_t>& peers) {
    const auto& a = w.agents[i];
    const double cost = w.params.distance_cost;
    std::vector<std::size_t> options;
    for (std::size_t s = 0; s < w.sites.size(); ++s)
        if (!w.sites[s].completed && fused.values[3 * s + 2] > 0.0) options.push_back(s);
    if (options.empty()) return Plan{std::nullopt, a.position, true};

    auto believed = [&](std::size_t s) {
        return clamp_to({static_cast<int>(std::lround(fused.values[3 * s])),
                         static_cast<int>(std::lround(fused.values[3 * s + 1]))},
                        w.width, w.height);
    };
    auto utility_for = [&](GridPos from) {
        std::vector<double> u;
        for (auto s : options) u.push_back(fused.values[3 * s + 2] - cost * manhattan(from, believed(s)));
        return u;
    };

    UtilitySpec spec;
    spec.self_utility = utility_for(a.position);
    for (auto q : peers) spec.peer_utilities.emplace_back(w.agents[q].id, utility_for(w.agents[q].position));
    for (auto s : options) {
        const bool fits = static_cast<std::size_t>(w.sites[s].spec.required_agents) == def.structure.size();
        spec.structure_utility.push_back(fits ? fused.values[3 * s + 2] : 0.0);
    }
    const auto shaped = shape_utility(spec, def);
    const std::size_t site = options[argmax(shaped)];

    Plan plan{site, believed(site), true};
    if (!def.is_individual()) {
        for (const auto& m : def.structure.members) {
            const auto* member = w.find(m);
            if (member && !(member->position == plan.target)) plan.ready = false;
        }
    }
    return plan;
}

}  // namespace

WorldState step(const WorldState& world, const StepOptions& options) {
    WorldState next = world;
    const std::size_t n = world.agents.size();

    // rng draws happen serially, before any parallel work.
    std::vector<std::vector<double>> noise(n);
    if (world.params.percept_noise > 0.0) {
        std::normal_distribution<double> dist(0.0, world.params.percept_noise);
        for (auto& row : noise) {
            row.resize(world.sites.size());
            for (auto& v : row) v = dist(next.rng);
        }
    }

    const auto features = world_features(world);
    std::vector<SelfDefinition> defs(n, SelfDefinition::individual(""));
    std::vector<Observation> percepts(n);
    parallel_for(n, options.threads, [&](std::size_t i) {
        percepts[i] = perceive(world, i, noise[i]);
        defs[i] = self_definition_for(world, i, features);
    });

    std::vector<std::vector<std::size_t>> peers(n);
    std::vector<Plan> plans(n);
    parallel_for(n, options.threads, [&](std::size_t i) {
        peers[i] = structure_peers(world, i, defs[i]);
        std::vector<Observation> peer_percepts;
        for (auto q : peers[i]) peer_percepts.push_back(percepts[q]);
        const auto fused = fuse_perception(percepts[i], peer_percepts, defs[i]);
        plans[i] = make_plan(world, i, fused, defs[i], peers[i]);
    });

    std::vector<Action> actions(n, Action::Stay);
    parallel_for(n, options.threads, [&](std::size_t i) {
        const GridPos here = world.agents[i].position;
        const auto own = score_actions(plans[i], here, world);
        std::vector<std::pair<AgentId, ActionScores>> advice;
        for (auto q : peers[i]) advice.emplace_back(world.agents[q].id, score_actions(plans[q], here, world));
        actions[i] = kActions[argmax(weight_decisions(own, advice, defs[i]).scores)];
    });

    // Tick barrier: commit all moves at once. Non-site cells hold one agent;
    // a stationary agent keeps its cell, otherwise the lowest id wins.
    std::vector<GridPos> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[i] = apply(actions[i], world.agents[i].position, world.width, world.height);
    for (bool changed = true; changed;) {
        changed = false;
        std::map<std::pair<int, int>, std::vector<std::size_t>> occupants;
        for (std::size_t i = 0; i < n; ++i)
            if (!world.site_at(pos[i])) occupants[{pos[i].x, pos[i].y}].push_back(i);
        for (auto& [_, who] : occupants) {
            if (who.size() < 2) continue;
            auto keeper = std::find_if(who.begin(), who.end(),
                                       [&](std::size_t i) { return pos[i] == world.agents[i].position; });
            std::size_t keep = keeper != who.end() ? *keeper : *std::min_element(who.begin(), who.end(), [&](auto x, auto y) {
                return world.agents[x].id < world.agents[y].id;
            });
            for (auto i : who) {
                if (i != keep) {
                    pos[i] = world.agents[i].position;
                    changed = true;
                }
            }
        }
    }

    for (auto& a : next.agents) a.last_reward = 0.0;
    for (std::size_t s = 0; s < next.sites.size(); ++s) {
        auto& site = next.sites[s];
        if (site.completed) continue;
        std::vector<std::size_t> engaged;
        for (std::size_t i = 0; i < n; ++i)
            if (actions[i] == Action::Interact && pos[i] == site.spec.position) engaged.push_back(i);
        if (engaged.empty() || engaged.size() != static_cast<std::size_t>(site.spec.required_agents)) continue;
        site.completed = true;
        const double share = site.spec.reward / static_cast<double>(engaged.size());
        for (auto i : engaged) next.agents[i].last_reward += share;
    }

    for (std::size_t i = 0; i < n; ++i) {
        auto& a = next.agents[i];
        a.position = pos[i];
        a.last_action = actions[i];
        a.total_reward += a.last_reward;
        a.recent.push_back(actions[i]);
        while (a.recent.size() > world.params.action_window) a.recent.pop_front();
        a.task = plans[i].site;
        a.self_def = defs[i];
        a.goal_progress = goal_attainment(a.goal, next.sites);
    }
    ++next.tick;
    return next;
}

}  // namespace smi
