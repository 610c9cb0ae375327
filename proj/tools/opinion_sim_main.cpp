// Command-line front end: run / sweep / experiment / validate.
// Exit codes: 0 success, 1 usage or config error, 2 runtime failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opdyn/config.hpp"
#include "opdyn/engine.hpp"
#include "opdyn/errors.hpp"
#include "opdyn/experiments.hpp"
#include "opdyn/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

// "a..b" (inclusive) or a single "n".
std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
    auto parse_one = [&](const std::string& s) {
        std::size_t pos = 0;
        std::uint64_t value = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("bad seed value: " + s);
        return value;
    };
    auto dots = text.find("..");
    if (dots == std::string::npos) {
        return {parse_one(text)};
    }
    std::uint64_t lo = parse_one(text.substr(0, dots));
    std::uint64_t hi = parse_one(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("seed range must satisfy a <= b: " + text);
    std::vector<std::uint64_t> seeds;
    seeds.reserve(hi - lo + 1);
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
}

struct RunOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> steps;
    std::optional<std::string> out_dir;
};

bool wants_format(const opdyn::OutputSpec& spec, const std::string& fmt) {
    for (const std::string& f : spec.formats) {
        if (f == fmt) return true;
    }
    return false;
}

int do_run(const RunOptions& options) {
    opdyn::RunConfig config;
    try {
        config = opdyn::load_config_file(options.config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (options.seed) config.seed = *options.seed;
    if (options.steps) config.steps = *options.steps;

    opdyn::OutputSpec output = config.output.value_or(opdyn::OutputSpec{});
    if (options.out_dir) output.dir = *options.out_dir;

    try {
        std::filesystem::create_directories(output.dir);
        opdyn::SimulationState state = opdyn::init_network(opdyn::to_sim_params(config), config.seed);
        opdyn::AdjacencyMatrix initial_graph = state.adjacency;
        opdyn::DenseMatrix initial_opinions = state.opinions;

        opdyn::RunResult result = opdyn::run(std::move(state), config.steps, config.stability);

        std::filesystem::path dir(output.dir);
        if (wants_format(output, "csv")) {
            opdyn::write_metrics_csv(result.trajectory, (dir / "metrics.csv").string());
        }
        if (wants_format(output, "dot")) {
            opdyn::export_graph_dot(initial_graph, initial_opinions,
                                    (dir / "graph_initial.dot").string());
            opdyn::export_graph_dot(result.final_state.adjacency, result.final_state.opinions,
                                    (dir / "graph_final.dot").string());
        }
        if (wants_format(output, "json")) {
            opdyn::export_graph_json(initial_graph, initial_opinions,
                                     (dir / "graph_initial.json").string());
            opdyn::export_graph_json(result.final_state.adjacency, result.final_state.opinions,
                                     (dir / "graph_final.json").string());
        }

        const opdyn::StepMetrics& last = result.trajectory.back();
        std::cout << "run finished: seed " << config.seed << ", " << result.trajectory.size()
                  << " steps\n";
        std::cout << "final mean opinion:";
        for (double v : last.mean_opinion) std::cout << " " << opdyn::format_double(v);
        std::cout << "\ncomponents " << last.component_count << ", mean degree "
                  << opdyn::format_double(last.mean_degree) << ", dispersion "
                  << opdyn::format_double(last.intra_cluster_dispersion) << "\n";
        if (result.stabilized_at) {
            std::cout << "stabilized at step " << *result.stabilized_at << "\n";
        }
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int do_sweep(const std::string& config_path, const std::string& seeds_text,
             const std::optional<std::string>& out_dir) {
    opdyn::RunConfig config;
    std::vector<std::uint64_t> seeds;
    try {
        config = opdyn::load_config_file(config_path);
        seeds = parse_seed_range(seeds_text);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::string dir = out_dir.value_or(config.output ? config.output->dir : ".");
    try {
        opdyn::ExperimentConfig sweep;
        sweep.name = "sweep";
        sweep.horizon = config.steps;
        sweep.seeds = std::move(seeds);
        sweep.variations.push_back({"config", opdyn::to_sim_params(config)});
        opdyn::ExperimentResult result = opdyn::seed_sweep(sweep);

        std::filesystem::create_directories(dir);
        std::filesystem::path base(dir);
        opdyn::atomic_write_file((base / "sweep_raw.csv").string(),
                                 opdyn::experiment_raw_csv_string(result));
        opdyn::atomic_write_file((base / "sweep_aggregate.csv").string(),
                                 opdyn::experiment_aggregate_csv_string(result));

        const opdyn::VariationAggregate& agg = result.aggregates.front();
        std::cout << "sweep finished: " << agg.completed << " runs ok, " << agg.failed
                  << " failed\n";
        if (!agg.mean_final_opinion.empty()) {
            std::cout << "mean final opinion:";
            for (double v : agg.mean_final_opinion) std::cout << " " << opdyn::format_double(v);
            std::cout << "\n";
        }
        return agg.failed == 0 ? kExitOk : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "sweep failed: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int do_experiment(const std::string& name, const std::string& seeds_text,
                  const std::string& out_dir) {
    std::vector<std::uint64_t> seeds;
    opdyn::ExperimentConfig config;
    try {
        seeds = parse_seed_range(seeds_text);
        if (name == "popular-spectrum") {
            config = opdyn::popular_spectrum_config(seeds);
        } else if (name == "strategic-spectrum") {
            config = opdyn::strategic_spectrum_config(seeds);
        } else if (name == "strat-vs-stub") {
            config = opdyn::strategic_vs_stubborn_config(seeds);
        } else {
            std::cerr << "unknown experiment: " << name
                      << " (expected popular-spectrum, strategic-spectrum or strat-vs-stub)\n";
            return kExitUsage;
        }
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        opdyn::ExperimentResult result = opdyn::seed_sweep(config);

        std::filesystem::path base(out_dir);
        std::filesystem::create_directories(base / "trajectories");
        std::string stem = result.name;
        opdyn::atomic_write_file((base / (stem + "_raw.csv")).string(),
                                 opdyn::experiment_raw_csv_string(result));
        opdyn::atomic_write_file((base / (stem + "_aggregate.csv")).string(),
                                 opdyn::experiment_aggregate_csv_string(result));
        opdyn::atomic_write_file((base / (stem + "_result.json")).string(),
                                 opdyn::experiment_result_json_string(result));
        std::size_t failed = 0;
        for (const opdyn::RunRecord& record : result.runs) {
            if (!record.ok) {
                ++failed;
                continue;
            }
            std::string file = record.variation + "_seed" + std::to_string(record.seed) + ".csv";
            opdyn::write_metrics_csv(record.trajectory, (base / "trajectories" / file).string());
        }

        std::cout << "experiment " << result.name << ": " << result.runs.size() - failed
                  << " runs ok, " << failed << " failed\n";
        for (const opdyn::VariationAggregate& agg : result.aggregates) {
            std::cout << "  " << agg.variation << ":";
            for (double v : agg.mean_final_opinion) std::cout << " " << opdyn::format_double(v);
            std::cout << "\n";
        }
        return failed == 0 ? kExitOk : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "experiment failed: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int do_validate(const std::string& config_path) {
    try {
        opdyn::RunConfig config = opdyn::load_config_file(config_path);
        std::cout << "config OK: " << config.n_standard << " standard agents, " << config.m
                  << " topics, " << config.controllers.size() << " controller group(s)\n";
        return kExitOk;
    } catch (const opdyn::ConfigError& e) {
        const char* kind = e.kind() == opdyn::ConfigErrorKind::Syntax    ? "syntax"
                           : e.kind() == opdyn::ConfigErrorKind::Schema ? "schema"
                                                                        : "range";
        std::cerr << "config " << kind << " error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Seed-reproducible simulator for co-evolving opinions and network topology"};
    app.require_subcommand(1);

    RunOptions run_options;
    CLI::App* run_cmd = app.add_subcommand("run", "Run one simulation from a config file");
    run_cmd->add_option("--config", run_options.config_path, "Config JSON path")->required();
    std::uint64_t seed_override = 0;
    std::size_t steps_override = 0;
    std::string run_out;
    CLI::Option* seed_opt = run_cmd->add_option("--seed", seed_override, "Override config seed");
    CLI::Option* steps_opt = run_cmd->add_option("--steps", steps_override, "Override step count");
    CLI::Option* out_opt = run_cmd->add_option("--out", run_out, "Output directory");

    std::string sweep_config, sweep_seeds, sweep_out;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run one config across a seed range");
    sweep_cmd->add_option("--config", sweep_config, "Config JSON path")->required();
    sweep_cmd->add_option("--seeds", sweep_seeds, "Seed range a..b (inclusive) or single seed")
        ->required();
    CLI::Option* sweep_out_opt = sweep_cmd->add_option("--out", sweep_out, "Output directory");

    std::string exp_name, exp_seeds = "0..19", exp_out = ".";
    CLI::App* exp_cmd = app.add_subcommand("experiment", "Run a named experiment");
    exp_cmd->add_option("name", exp_name, "popular-spectrum | strategic-spectrum | strat-vs-stub")
        ->required();
    exp_cmd->add_option("--seeds", exp_seeds, "Seed range a..b (default 0..19)");
    exp_cmd->add_option("--out", exp_out, "Output directory (default .)");

    std::string validate_config;
    CLI::App* validate_cmd = app.add_subcommand("validate", "Check a config file and exit");
    validate_cmd->add_option("--config", validate_config, "Config JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (run_cmd->parsed()) {
        if (seed_opt->count() > 0) run_options.seed = seed_override;
        if (steps_opt->count() > 0) run_options.steps = steps_override;
        if (out_opt->count() > 0) run_options.out_dir = run_out;
        return do_run(run_options);
    }
    if (sweep_cmd->parsed()) {
        std::optional<std::string> out;
        if (sweep_out_opt->count() > 0) out = sweep_out;
        return do_sweep(sweep_config, sweep_seeds, out);
    }
    if (exp_cmd->parsed()) {
        return do_experiment(exp_name, exp_seeds, exp_out);
    }
    if (validate_cmd->parsed()) {
        return do_validate(validate_config);
    }
    return kExitUsage;
}
