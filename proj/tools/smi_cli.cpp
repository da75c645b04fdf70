// smi: worked-example validation, batch metrics, episodes and sweeps.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "smi/episode.hpp"
#include "smi/error.hpp"
#include "smi/metrics_table.hpp"
#include "smi/sigfig.hpp"
#include "smi/sweep.hpp"
#include "smi/validation.hpp"

namespace fs = std::filesystem;
using namespace smi;

namespace {

OutputFormat parse_format(const std::string& f) {
    if (f == "csv") return OutputFormat::Csv;
    if (f == "json-lines") return OutputFormat::JsonLines;
    return OutputFormat::Table;
}

int cmd_validate(const std::string& format) {
    const auto report = run_validation();
    const auto fmt = parse_format(format);
    if (fmt == OutputFormat::JsonLines) {
        for (const auto& e : report.examples) {
            std::cout << nlohmann::json{{"id", e.id},
                                        {"inputs", e.inputs},
                                        {"computed", e.computed},
                                        {"exact", e.exact},
                                        {"presented", e.presented},
                                        {"reference", e.reference},
                                        {"status", std::string(to_string(e.status))},
                                        {"diagnostic", e.diagnostic}}
                             .dump()
                      << '\n';
        }
    } else if (fmt == OutputFormat::Csv) {
        std::cout << "id,computed,presented,reference,status\n";
        for (const auto& e : report.examples) {
            std::cout << e.id << ',' << shortest(e.computed) << ',' << e.presented << ',' << e.reference << ','
                      << to_string(e.status) << '\n';
        }
    } else {
        std::cout << std::left << std::setw(5) << "id" << std::setw(44) << "example" << std::setw(22) << "computed"
                  << std::setw(8) << "2 s.f." << std::setw(10) << "reference"
                  << "status\n";
        for (const auto& e : report.examples) {
            std::cout << std::left << std::setw(5) << e.id << std::setw(44) << e.title << std::setw(22)
                      << shortest(e.computed) << std::setw(8) << e.presented << std::setw(10) << e.reference
                      << to_string(e.status) << '\n';
            if (!e.diagnostic.empty()) std::cout << "      note: " << e.diagnostic << '\n';
        }
    }
    std::cerr << report.count(ExampleStatus::Match) << "/" << report.examples.size() << " match, "
              << report.count(ExampleStatus::KnownDiscrepancy) << " known discrepancy, "
              << report.count(ExampleStatus::Fail) << " failed"
              << (report.id_checksum_ok ? "" : "; example set checksum mismatch") << '\n';
    return report.ok() ? 0 : 1;
}

int cmd_metrics(const std::string& input, const std::string& format) {
    std::ifstream in(input);
    if (!in) {
        std::cerr << "error: cannot open '" << input << "'\n";
        return 2;
    }
    const auto rows = parse_metric_table(in);
    std::cout << format_metric_results(compute_metric_table(rows), parse_format(format));
    return 0;
}

void print_report(const MetricsReport& r, const std::string& format) {
    const auto fmt = parse_format(format);
    if (fmt == OutputFormat::JsonLines) {
        std::cout << to_json(r).dump() << '\n';
        return;
    }
    if (fmt == OutputFormat::Csv) {
        std::cout << "agent,policy,mean_ismi,final_ismi,goal_attainment,ticks_to_goal,total_reward\n";
        for (const auto& a : r.agents) {
            std::cout << a.id << ',' << to_string(a.policy) << ',' << shortest(a.mean_ismi) << ','
                      << shortest(a.final_ismi) << ',' << shortest(a.goal_attainment) << ','
                      << (a.ticks_to_goal ? std::to_string(*a.ticks_to_goal) : "") << ',' << shortest(a.total_reward)
                      << '\n';
        }
        return;
    }
    std::cout << "scenario " << r.scenario << "  seed " << r.seed << "  ticks " << r.ticks << '\n';
    std::cout << std::left << std::setw(12) << "agent" << std::setw(18) << "policy" << std::setw(11) << "mean ISMI"
              << std::setw(11) << "final ISMI" << std::setw(11) << "attained" << "ticks to goal\n";
    for (const auto& a : r.agents) {
        std::cout << std::left << std::setw(12) << a.id << std::setw(18) << to_string(a.policy) << std::setw(11)
                  << to_significant(a.mean_ismi, 3) << std::setw(11) << to_significant(a.final_ismi, 3)
                  << std::setw(11) << to_significant(a.goal_attainment, 3)
                  << (a.ticks_to_goal ? std::to_string(*a.ticks_to_goal) : "-") << '\n';
    }
    std::cout << "GSMI mean " << to_significant(r.mean_gsmi, 3) << ", final " << to_significant(r.final_gsmi, 3)
              << "; group attainment " << to_significant(r.group_attainment, 3) << "; sites completed "
              << r.completed_sites.size() << '\n';
}

int cmd_sim(const std::string& config_path, std::uint64_t seed, const std::string& out_dir, unsigned threads,
            const std::string& format) {
    const auto config = load_scenario(config_path);
    const auto log = run_episode(config, seed, RunOptions{threads});
    const auto report = evaluate(log);
    fs::create_directories(out_dir);
    write_file_atomic(fs::path(out_dir) / config.log_file, to_jsonl(log));
    write_file_atomic(fs::path(out_dir) / config.summary_file, to_json(report).dump(2) + "\n");
    print_report(report, format);
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& params, const std::string& seeds,
              const std::string& out_dir, unsigned jobs) {
    SweepSpec spec;
    spec.base = load_scenario(config_path);
    for (const auto& p : params) spec.parameters.push_back(parse_sweep_parameter(p));
    spec.seeds = parse_seed_list(seeds);
    spec.jobs = jobs;
    fs::create_directories(out_dir);
    const auto path = fs::path(out_dir) / "sweep.csv";
    const auto outcome = run_sweep(spec, path);
    std::cout << "sweep: " << outcome.total << " cells, " << outcome.skipped << " already complete, " << outcome.ran
              << " run, " << outcome.failed << " failed -> " << path.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Socially-minded intelligence metrics and multi-agent simulation"};
    app.require_subcommand(1);

    std::string format = "table";
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "table|csv|json-lines")
            ->check(CLI::IsMember({"table", "csv", "json-lines"}));
    };

    auto* validate = app.add_subcommand("validate", "Recompute the worked examples");
    add_format(validate);

    std::string input;
    auto* metrics = app.add_subcommand("metrics", "ISMI/GSMI for each row of a CSV file");
    metrics->add_option("input", input, "CSV file")->required();
    add_format(metrics);

    std::string config, out = "out", seeds = "1";
    std::uint64_t seed = 1;
    unsigned threads = 1, jobs = 1;
    auto* sim = app.add_subcommand("sim", "Run one episode");
    sim->add_option("--config", config, "scenario JSON")->required();
    sim->add_option("--seed", seed, "RNG seed");
    sim->add_option("--out", out, "output directory");
    sim->add_option("--threads", threads, "worker threads per tick (0 = all cores)");
    add_format(sim);

    std::vector<std::string> params;
    auto* sweep = app.add_subcommand("sweep", "Run a parameter x seed sweep");
    sweep->add_option("--config", config, "base scenario JSON")->required();
    sweep->add_option("--param", params, "name=v1,v2,... (repeatable)");
    sweep->add_option("--seeds", seeds, "1,2,3 or 1..20");
    sweep->add_option("--out", out, "output directory (sweep.csv)");
    sweep->add_option("--jobs", jobs, "parallel cells (0 = all cores)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) return cmd_validate(format);
        if (*metrics) return cmd_metrics(input, format);
        if (*sim) return cmd_sim(config, seed, out, threads, format);
        if (*sweep) return cmd_sweep(config, params, seeds, out, jobs);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
