#include "smi/sweep.hpp"

#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "smi/episode.hpp"
#include "smi/error.hpp"
#include "smi/sigfig.hpp"

namespace smi {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::ConfigInvalid, what); }

double to_double(const std::string& name, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) bad("sweep." + name + ": '" + v + "' is not a number");
        return d;
    } catch (const std::logic_error&) {
        bad("sweep." + name + ": '" + v + "' is not a number");
    }
}

int to_int(const std::string& name, const std::string& v) {
    try {
        std::size_t used = 0;
        const int i = std::stoi(v, &used);
        if (used != v.size()) bad("sweep." + name + ": '" + v + "' is not an integer");
        return i;
    } catch (const std::logic_error&) {
        bad("sweep." + name + ": '" + v + "' is not an integer");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::string join(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    return line;
}

const std::vector<std::string> kResultColumns{"status",
                                              "ticks",
                                              "group_attainment",
                                              "mean_gsmi",
                                              "final_gsmi",
                                              "attainment_socially_minded",
                                              "attainment_pure_individual",
                                              "attainment_fixed_collective",
                                              "sites_completed",
                                              "error"};

std::vector<std::string> evaluate_cell(const SweepSpec& spec, const SweepCell& cell) {
    try {
        ScenarioConfig config = spec.base;
        for (std::size_t p = 0; p < spec.parameters.size(); ++p) {
            config = apply_parameter(std::move(config), spec.parameters[p].name, cell.values[p]);
        }
        validate_scenario(config);
        const auto report = evaluate(run_episode(config, cell.seed));
        auto policy = [&](PolicyKind k) {
            auto it = report.policy_attainment.find(std::string(to_string(k)));
            return it == report.policy_attainment.end() ? std::string() : shortest(it->second);
        };
        return {"ok",
                std::to_string(report.ticks),
                shortest(report.group_attainment),
                shortest(report.mean_gsmi),
                shortest(report.final_gsmi),
                policy(PolicyKind::SociallyMinded),
                policy(PolicyKind::PureIndividual),
                policy(PolicyKind::FixedCollective),
                std::to_string(report.completed_sites.size()),
                ""};
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (auto& c : msg)
            if (c == ',' || c == '\n') c = ';';
        std::vector<std::string> row(kResultColumns.size());
        row.front() = "error";
        row.back() = msg;
        return row;
    }
}

}  // namespace

const std::vector<std::string>& sweep_parameter_names() {
    static const std::vector<std::string> names{"agent_count",       "policy",           "horizon",
                                                "fit_threshold",     "sma",              "readiness.individual",
                                                "readiness.subgroup", "readiness.group", "distance_cost",
                                                "percept_noise"};
    return names;
}

ScenarioConfig apply_parameter(ScenarioConfig config, const std::string& name, const std::string& value) {
    if (name == "agent_count") {
        const int n = to_int(name, value);
        if (n < 1) bad("sweep.agent_count: must be >= 1");
        return with_agent_count(std::move(config), static_cast<std::size_t>(n));
    }
    if (name == "policy") {
        auto k = parse_policy(value);
        if (!k) bad("sweep.policy: unknown policy '" + value + "'");
        return with_policy(std::move(config), *k);
    }
    if (name == "horizon") {
        config.horizon = to_int(name, value);
    } else if (name == "fit_threshold") {
        config.landscape.fit_threshold = to_double(name, value);
    } else if (name == "sma") {
        for (auto& a : config.agents) a.sma = to_double(name, value);
    } else if (name == "readiness.individual" || name == "readiness.subgroup" || name == "readiness.group") {
        const double v = to_double(name, value);
        for (auto& a : config.agents) {
            double ind = a.readiness.individual(), sub = a.readiness.subgroup(), grp = a.readiness.group();
            (name == "readiness.individual" ? ind : name == "readiness.subgroup" ? sub : grp) = v;
            try {
                a.readiness = PerceiverReadiness(ind, sub, grp);
            } catch (const Error& e) {
                bad("sweep." + name + ": " + e.detail());
            }
        }
    } else if (name == "distance_cost") {
        config.distance_cost = to_double(name, value);
    } else if (name == "percept_noise") {
        config.percept_noise = to_double(name, value);
    } else {
        bad("sweep: unknown parameter '" + name + "'");
    }
    validate_scenario(config);
    return config;
}

std::vector<SweepCell> sweep_cells(const SweepSpec& spec) {
    std::vector<SweepCell> cells{SweepCell{}};
    for (const auto& p : spec.parameters) {
        std::vector<SweepCell> next;
        for (const auto& c : cells) {
            for (const auto& v : p.values) {
                auto extended = c;
                extended.values.push_back(v);
                next.push_back(std::move(extended));
            }
        }
        cells = std::move(next);
    }
    std::vector<SweepCell> out;
    for (const auto& c : cells) {
        for (auto seed : spec.seeds) {
            auto cell = c;
            cell.seed = seed;
            out.push_back(std::move(cell));
        }
    }
    return out;
}

std::vector<std::string> sweep_header(const SweepSpec& spec) {
    std::vector<std::string> h{"scenario"};
    for (const auto& p : spec.parameters) h.push_back(p.name);
    h.push_back("seed");
    h.insert(h.end(), kResultColumns.begin(), kResultColumns.end());
    return h;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::ConfigInvalid, "cannot write '" + tmp.string() + "'");
        out << contents;
        if (!out.flush()) throw Error(ErrorKind::ConfigInvalid, "failed writing '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

SweepOutcome run_sweep(const SweepSpec& spec, const std::filesystem::path& out_csv, std::size_t stop_after) {
    for (const auto& p : spec.parameters) {
        if (std::find(sweep_parameter_names().begin(), sweep_parameter_names().end(), p.name) ==
            sweep_parameter_names().end()) {
            bad("sweep: unknown parameter '" + p.name + "'");
        }
        if (p.values.empty()) bad("sweep." + p.name + ": no values");
    }
    if (spec.seeds.empty()) bad("sweep: no seeds");

    const auto header = sweep_header(spec);
    const auto cells = sweep_cells(spec);
    const std::size_t key_width = 1 + spec.parameters.size() + 1;
    auto key_of = [&](const SweepCell& c) {
        std::vector<std::string> k{spec.base.name};
        k.insert(k.end(), c.values.begin(), c.values.end());
        k.push_back(std::to_string(c.seed));
        return join(k);
    };

    // Rows already present with status ok are complete.
    std::map<std::string, std::string> done;
    if (std::filesystem::exists(out_csv)) {
        std::ifstream in(out_csv);
        std::string line;
        std::getline(in, line);
        if (line == join(header)) {
            while (std::getline(in, line)) {
                auto cellv = split(line, ',');
                if (cellv.size() != header.size() || cellv[key_width] != "ok") continue;
                done[join(std::vector<std::string>(cellv.begin(), cellv.begin() + static_cast<long>(key_width)))] = line;
            }
        }
    }

    SweepOutcome outcome;
    outcome.total = cells.size();
    std::vector<std::string> rows(cells.size());
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto it = done.find(key_of(cells[i]));
        if (it != done.end()) {
            rows[i] = it->second;
            ++outcome.skipped;
        } else {
            pending.push_back(i);
        }
    }

    std::mutex mutex;
    auto persist = [&] {
        std::string text = join(header) + "\n";
        for (const auto& r : rows)
            if (!r.empty()) text += r + "\n";
        write_file_atomic(out_csv, text);
    };
    persist();

    std::size_t next = 0;
    bool stop = false;
    auto worker = [&] {
        for (;;) {
            std::size_t idx;
            {
                std::lock_guard lock(mutex);
                if (stop || next >= pending.size()) return;
                idx = pending[next++];
            }
            const auto& cell = cells[idx];
            std::vector<std::string> row{spec.base.name};
            row.insert(row.end(), cell.values.begin(), cell.values.end());
            row.push_back(std::to_string(cell.seed));
            const auto result = evaluate_cell(spec, cell);
            row.insert(row.end(), result.begin(), result.end());

            std::lock_guard lock(mutex);
            rows[idx] = join(row);
            ++outcome.ran;
            if (result.front() != "ok") ++outcome.failed;
            persist();
            if (outcome.ran >= stop_after) stop = true;
        }
    };
    const unsigned jobs = spec.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.jobs;
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    return outcome;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    auto parse_one = [&](const std::string& s) -> std::uint64_t {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(s, &used);
            if (used != s.size()) bad("seeds: '" + s + "' is not an unsigned integer");
            return v;
        } catch (const std::logic_error&) {
            bad("seeds: '" + s + "' is not an unsigned integer");
        }
    };
    if (auto pos = text.find(".."); pos != std::string::npos) {
        const auto lo = parse_one(text.substr(0, pos));
        const auto hi = parse_one(text.substr(pos + 2));
        if (hi < lo) bad("seeds: empty range '" + text + "'");
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
        return seeds;
    }
    for (const auto& part : split(text, ',')) seeds.push_back(parse_one(part));
    return seeds;
}

SweepParameter parse_sweep_parameter(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) bad("sweep parameter '" + text + "' must look like name=v1,v2");
    SweepParameter p{text.substr(0, eq), split(text.substr(eq + 1), ',')};
    for (const auto& v : p.values)
        if (v.empty()) bad("sweep." + p.name + ": empty value");
    return p;
}

}  // namespace smi
