#include "smi/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "smi/error.hpp"

namespace smi {

using nlohmann::json;

std::string_view to_string(PolicyKind kind) noexcept {
    switch (kind) {
        case PolicyKind::SociallyMinded: return "socially_minded";
        case PolicyKind::PureIndividual: return "pure_individual";
        case PolicyKind::FixedCollective: return "fixed_collective";
    }
    return "?";
}

std::string_view to_string(SiteKind kind) noexcept {
    switch (kind) {
        case SiteKind::Solo: return "solo";
        case SiteKind::Subgroup: return "subgroup";
        case SiteKind::Collective: return "collective";
    }
    return "?";
}

std::optional<PolicyKind> parse_policy(std::string_view name) noexcept {
    for (auto k : {PolicyKind::SociallyMinded, PolicyKind::PureIndividual, PolicyKind::FixedCollective})
        if (to_string(k) == name) return k;
    return std::nullopt;
}

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
    throw Error(ErrorKind::ConfigInvalid, path + ": " + what);
}

// Typed access into a JSON object that rejects unknown keys.
class Reader {
public:
    Reader(const json& node, std::string path, std::set<std::string> allowed) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) invalid(path_, "expected an object");
        for (const auto& [key, _] : node_.items()) {
            if (!allowed.count(key)) invalid(child(key), "unknown field");
        }
    }

    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const std::string& key) const { return node_.contains(key); }
    const json& at(const std::string& key) const { return node_.at(key); }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) const {
        if (!has(key)) {
            if (fallback) return *fallback;
            invalid(child(key), "required field missing");
        }
        const auto& v = node_.at(key);
        if (!v.is_number()) invalid(child(key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) invalid(child(key), "must be finite");
        return d;
    }

    int integer(const std::string& key, std::optional<int> fallback = std::nullopt) const {
        if (!has(key)) {
            if (fallback) return *fallback;
            invalid(child(key), "required field missing");
        }
        const auto& v = node_.at(key);
        if (!v.is_number_integer()) invalid(child(key), "expected an integer");
        return v.get<int>();
    }

    std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) const {
        if (!has(key)) {
            if (fallback) return *fallback;
            invalid(child(key), "required field missing");
        }
        const auto& v = node_.at(key);
        if (!v.is_string()) invalid(child(key), "expected a string");
        return v.get<std::string>();
    }

private:
    const json& node_;
    std::string path_;
};

GridPos parse_pos(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
        invalid(path, "expected [x, y] integer pair");
    }
    return {v[0].get<int>(), v[1].get<int>()};
}

std::vector<double> parse_vector(const json& v, const std::string& path) {
    if (!v.is_array()) invalid(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) invalid(path + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

void check_range(double v, double lo, double hi, const std::string& path, const char* name) {
    if (!(v >= lo && v <= hi)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s must be in [%g, %g], got %g", name, lo, hi, v);
        invalid(path, buf);
    }
}

bool on_grid(GridPos p, const ScenarioConfig& c) { return p.x >= 0 && p.y >= 0 && p.x < c.width && p.y < c.height; }

}  // namespace

ScenarioConfig parse_scenario(const json& doc) {
    Reader root(doc, "", {"name", "grid", "horizon", "landscape", "model", "prototypes", "sites", "agents", "outputs"});
    ScenarioConfig c;
    c.name = root.string("name", c.name);
    c.horizon = root.integer("horizon");

    if (!root.has("grid")) invalid("grid", "required field missing");
    Reader grid(root.at("grid"), "grid", {"width", "height"});
    c.width = grid.integer("width");
    c.height = grid.integer("height");

    if (root.has("landscape")) {
        Reader l(root.at("landscape"), "landscape", {"fit_threshold", "feature_weights", "action_window"});
        c.landscape.fit_threshold = l.number("fit_threshold", c.landscape.fit_threshold);
        c.action_window = l.integer("action_window", c.action_window);
        if (l.has("feature_weights")) {
            Reader w(l.at("feature_weights"), "landscape.feature_weights", {"position", "task", "actions"});
            c.feature_weights.position = w.number("position", c.feature_weights.position);
            c.feature_weights.task = w.number("task", c.feature_weights.task);
            c.feature_weights.actions = w.number("actions", c.feature_weights.actions);
        }
    }
    if (root.has("model")) {
        Reader m(root.at("model"), "model", {"distance_cost", "percept_noise"});
        c.distance_cost = m.number("distance_cost", c.distance_cost);
        c.percept_noise = m.number("percept_noise", c.percept_noise);
    }
    if (root.has("prototypes")) {
        Reader p(root.at("prototypes"), "prototypes", {"scale", "structures"});
        c.prototypes.scale = p.number("scale", 1.0);
        if (p.has("structures")) {
            const auto& s = p.at("structures");
            if (!s.is_object()) invalid("prototypes.structures", "expected an object");
            for (const auto& [key, vec] : s.items()) {
                c.prototypes.by_structure[key] = parse_vector(vec, "prototypes.structures." + key);
            }
        }
    }
    if (root.has("outputs")) {
        Reader o(root.at("outputs"), "outputs", {"log", "summary"});
        c.log_file = o.string("log", c.log_file);
        c.summary_file = o.string("summary", c.summary_file);
    }

    if (!root.has("sites")) invalid("sites", "required field missing");
    const auto& sites = root.at("sites");
    if (!sites.is_array()) invalid("sites", "expected an array");
    std::map<std::string, std::size_t> site_index;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const std::string path = "sites[" + std::to_string(i) + "]";
        Reader r(sites[i], path, {"id", "position", "kind", "required_agents", "reward"});
        SiteSpec s;
        s.id = r.string("id");
        if (!r.has("position")) invalid(r.child("position"), "required field missing");
        s.position = parse_pos(r.at("position"), r.child("position"));
        const auto kind = r.string("kind");
        if (kind == "solo") s.kind = SiteKind::Solo;
        else if (kind == "subgroup") s.kind = SiteKind::Subgroup;
        else if (kind == "collective") s.kind = SiteKind::Collective;
        else invalid(r.child("kind"), "expected one of solo|subgroup|collective");
        s.required_agents = r.integer("required_agents", s.kind == SiteKind::Solo ? 1 : 0);
        if (s.kind == SiteKind::Subgroup && !r.has("required_agents")) {
            invalid(r.child("required_agents"), "subgroup sites must state required_agents");
        }
        s.reward = r.number("reward", s.reward);
        if (site_index.count(s.id)) invalid(r.child("id"), "duplicate site id '" + s.id + "'");
        site_index[s.id] = i;
        c.sites.push_back(std::move(s));
    }

    if (!root.has("agents")) invalid("agents", "required field missing");
    const auto& agents = root.at("agents");
    if (!agents.is_array()) invalid("agents", "expected an array");
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const std::string path = "agents[" + std::to_string(i) + "]";
        Reader r(agents[i], path, {"id", "policy", "sma", "readiness", "goal", "start", "spawn_radius", "percepts"});
        AgentSpec a;
        a.id = r.string("id");
        const auto policy = r.string("policy", std::string(to_string(a.policy)));
        auto kind = parse_policy(policy);
        if (!kind) invalid(r.child("policy"), "expected socially_minded|pure_individual|fixed_collective");
        a.policy = *kind;
        a.sma = r.number("sma", a.sma);
        if (r.has("readiness")) {
            Reader rd(r.at("readiness"), r.child("readiness"), {"individual", "subgroup", "group"});
            const double ind = rd.number("individual", 1.0);
            const double sub = rd.number("subgroup", 1.0);
            const double grp = rd.number("group", 1.0);
            for (auto [v, name] : {std::pair{ind, "individual"}, {sub, "subgroup"}, {grp, "group"}}) {
                if (v < 0) invalid(rd.child(name), "readiness prior must be >= 0");
            }
            if (ind + sub + grp <= 0) invalid(r.child("readiness"), "at least one readiness prior must be > 0");
            a.readiness = PerceiverReadiness(ind, sub, grp);
        }
        if (!r.has("goal")) invalid(r.child("goal"), "required field missing");
        a.goal = parse_vector(r.at("goal"), r.child("goal"));
        if (!r.has("start")) invalid(r.child("start"), "required field missing");
        a.start = parse_pos(r.at("start"), r.child("start"));
        a.spawn_radius = r.integer("spawn_radius", 0);
        if (r.has("percepts")) {
            const auto& p = r.at("percepts");
            if (!p.is_object()) invalid(r.child("percepts"), "expected an object keyed by site id");
            for (const auto& [site, belief] : p.items()) {
                const std::string bpath = r.child("percepts") + "." + site;
                auto it = site_index.find(site);
                if (it == site_index.end()) invalid(bpath, "unknown site id");
                Reader b(belief, bpath, {"position", "value"});
                SitePercept sp;
                if (b.has("position")) sp.position = parse_pos(b.at("position"), b.child("position"));
                if (b.has("value")) sp.value = b.number("value");
                a.percepts[it->second] = sp;
            }
        }
        c.agents.push_back(std::move(a));
    }
    for (auto& s : c.sites)
        if (s.kind == SiteKind::Collective) s.required_agents = static_cast<int>(c.agents.size());

    validate_scenario(c);
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ConfigInvalid, "cannot open config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ConfigInvalid, path.string() + ": " + e.what());
    }
    return parse_scenario(doc);
}

void validate_scenario(const ScenarioConfig& c) {
    if (c.width < 1) invalid("grid.width", "must be >= 1");
    if (c.height < 1) invalid("grid.height", "must be >= 1");
    if (c.horizon < 0) invalid("horizon", "must be >= 0");
    if (c.action_window < 1) invalid("landscape.action_window", "must be >= 1");
    if (!(c.landscape.fit_threshold >= 0)) invalid("landscape.fit_threshold", "must be >= 0");
    if (c.feature_weights.position < 0) invalid("landscape.feature_weights.position", "must be >= 0");
    if (c.feature_weights.task < 0) invalid("landscape.feature_weights.task", "must be >= 0");
    if (c.feature_weights.actions < 0) invalid("landscape.feature_weights.actions", "must be >= 0");
    if (!(c.distance_cost >= 0)) invalid("model.distance_cost", "must be >= 0");
    if (!(c.percept_noise >= 0)) invalid("model.percept_noise", "must be >= 0");
    if (!(c.prototypes.scale > 0)) invalid("prototypes.scale", "must be > 0");
    if (c.agents.empty()) invalid("agents", "at least one agent is required");

    const std::size_t dim = 2 + c.sites.size() + 6;
    for (const auto& [key, proto] : c.prototypes.by_structure) {
        if (proto.size() != dim) {
            invalid("prototypes.structures." + key, "expected " + std::to_string(dim) + " feature values");
        }
    }

    for (std::size_t i = 0; i < c.sites.size(); ++i) {
        const auto& s = c.sites[i];
        const std::string path = "sites[" + std::to_string(i) + "]";
        if (!on_grid(s.position, c)) invalid(path + ".position", "outside the grid");
        if (!std::isfinite(s.reward) || s.reward < 0) invalid(path + ".reward", "must be finite and >= 0");
        if (s.kind == SiteKind::Solo && s.required_agents != 1) invalid(path + ".required_agents", "solo sites need 1");
        if (s.kind == SiteKind::Subgroup && s.required_agents < 2) {
            invalid(path + ".required_agents", "subgroup sites need >= 2 agents");
        }
        if (s.kind == SiteKind::Collective && s.required_agents != static_cast<int>(c.agents.size())) {
            invalid(path + ".required_agents", "collective sites require every agent");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (c.sites[j].position == s.position) invalid(path + ".position", "two sites share a cell");
        }
    }

    std::set<std::string> ids;
    for (std::size_t i = 0; i < c.agents.size(); ++i) {
        const auto& a = c.agents[i];
        const std::string path = "agents[" + std::to_string(i) + "]";
        if (a.id.empty()) invalid(path + ".id", "must be non-empty");
        if (a.id.find('+') != std::string::npos) invalid(path + ".id", "must not contain '+'");
        if (!ids.insert(a.id).second) invalid(path + ".id", "duplicate agent id '" + a.id + "'");
        check_range(a.sma, 0.0, 1.0, path + ".sma", "SMA");
        if (a.goal.size() != c.sites.size()) {
            invalid(path + ".goal", "expected one weight per site (" + std::to_string(c.sites.size()) + ")");
        }
        for (std::size_t g = 0; g < a.goal.size(); ++g) {
            if (!std::isfinite(a.goal[g])) invalid(path + ".goal[" + std::to_string(g) + "]", "must be finite");
        }
        if (!on_grid(a.start, c)) invalid(path + ".start", "outside the grid");
        if (a.spawn_radius < 0) invalid(path + ".spawn_radius", "must be >= 0");
        for (const auto& [site, p] : a.percepts) {
            if (site >= c.sites.size()) invalid(path + ".percepts", "unknown site index");
            if (p.position && !on_grid(*p.position, c)) {
                invalid(path + ".percepts." + c.sites[site].id + ".position", "outside the grid");
            }
            if (p.value && !std::isfinite(*p.value)) {
                invalid(path + ".percepts." + c.sites[site].id + ".value", "must be finite");
            }
        }
    }
    // Each agent needs a free non-site cell within its spawn box.
    long long free_cells = static_cast<long long>(c.width) * c.height - static_cast<long long>(c.sites.size());
    if (static_cast<long long>(c.agents.size()) > free_cells) invalid("agents", "more agents than free grid cells");
}

json to_json(const ScenarioConfig& c) {
    json sites = json::array();
    for (const auto& s : c.sites) {
        sites.push_back({{"id", s.id},
                         {"position", {s.position.x, s.position.y}},
                         {"kind", std::string(to_string(s.kind))},
                         {"required_agents", s.required_agents},
                         {"reward", s.reward}});
    }
    json agents = json::array();
    for (const auto& a : c.agents) {
        json percepts = json::object();
        for (const auto& [site, p] : a.percepts) {
            json b = json::object();
            if (p.position) b["position"] = {p.position->x, p.position->y};
            if (p.value) b["value"] = *p.value;
            percepts[c.sites[site].id] = b;
        }
        agents.push_back({{"id", a.id},
                          {"policy", std::string(to_string(a.policy))},
                          {"sma", a.sma},
                          {"readiness",
                           {{"individual", a.readiness.individual()},
                            {"subgroup", a.readiness.subgroup()},
                            {"group", a.readiness.group()}}},
                          {"goal", a.goal},
                          {"start", {a.start.x, a.start.y}},
                          {"spawn_radius", a.spawn_radius},
                          {"percepts", percepts}});
    }
    json structures = json::object();
    for (const auto& [k, v] : c.prototypes.by_structure) structures[k] = v;
    return {{"name", c.name},
            {"grid", {{"width", c.width}, {"height", c.height}}},
            {"horizon", c.horizon},
            {"landscape",
             {{"fit_threshold", c.landscape.fit_threshold},
              {"action_window", c.action_window},
              {"feature_weights",
               {{"position", c.feature_weights.position},
                {"task", c.feature_weights.task},
                {"actions", c.feature_weights.actions}}}}},
            {"model", {{"distance_cost", c.distance_cost}, {"percept_noise", c.percept_noise}}},
            {"prototypes", {{"scale", c.prototypes.scale}, {"structures", structures}}},
            {"sites", sites},
            {"agents", agents},
            {"outputs", {{"log", c.log_file}, {"summary", c.summary_file}}}};
}

std::string config_digest(const ScenarioConfig& config) {
    const std::string text = to_json(config).dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ScenarioConfig with_policy(ScenarioConfig config, PolicyKind policy) {
    for (auto& a : config.agents) a.policy = policy;
    return config;
}

ScenarioConfig with_agent_count(ScenarioConfig config, std::size_t count) {
    if (count == 0) invalid("agents", "agent count must be >= 1");
    const auto roster = config.agents;
    if (roster.empty()) invalid("agents", "roster is empty");
    config.agents.clear();
    for (std::size_t i = 0; i < count; ++i) {
        AgentSpec a = roster[i % roster.size()];
        if (i >= roster.size()) {
            a.id = roster[i % roster.size()].id + "_" + std::to_string(i / roster.size());
            a.spawn_radius = std::max(a.spawn_radius, 1);
        }
        config.agents.push_back(std::move(a));
    }
    for (auto& s : config.sites)
        if (s.kind == SiteKind::Collective) s.required_agents = static_cast<int>(count);
    validate_scenario(config);
    return config;
}

}  // namespace smi
