#include "opdyn/experiments.hpp"

#include <cmath>
#include <stdexcept>

namespace opdyn {

ExperimentResult seed_sweep(const ExperimentConfig& config) {
    if (config.seeds.empty()) {
        throw std::invalid_argument("seed_sweep: seed list must be non-empty");
    }
    if (config.variations.empty()) {
        throw std::invalid_argument("seed_sweep: need at least one variation");
    }

    std::vector<RunJob> jobs;
    jobs.reserve(config.variations.size() * config.seeds.size());
    for (const Variation& variation : config.variations) {
        for (std::uint64_t seed : config.seeds) {
            jobs.push_back(RunJob{variation.params, seed, config.horizon, std::nullopt});
        }
    }
    std::vector<RunOutcome> outcomes = run_batch(jobs);

    ExperimentResult result;
    result.name = config.name;
    result.horizon = config.horizon;
    result.runs.reserve(jobs.size());

    std::size_t idx = 0;
    for (const Variation& variation : config.variations) {
        VariationAggregate agg;
        agg.variation = variation.name;
        std::vector<double> sum, sum_sq;
        for (std::uint64_t seed : config.seeds) {
            RunOutcome& outcome = outcomes[idx++];
            RunRecord record;
            record.variation = variation.name;
            record.seed = seed;
            record.ok = outcome.ok;
            if (!outcome.ok) {
                record.error = outcome.error;
                ++agg.failed;
            } else {
                const StepMetrics& last = outcome.result.trajectory.back();
                record.final_mean_opinion = last.mean_opinion;
                record.final_mean_opinion_all = last.mean_opinion_all;
                record.final_component_count = last.component_count;
                record.final_mean_degree = last.mean_degree;
                record.final_dispersion = last.intra_cluster_dispersion;
                record.trajectory = std::move(outcome.result.trajectory);
                ++agg.completed;
                if (sum.empty()) {
                    sum.assign(record.final_mean_opinion.size(), 0.0);
                    sum_sq.assign(record.final_mean_opinion.size(), 0.0);
                }
                for (std::size_t t = 0; t < record.final_mean_opinion.size(); ++t) {
                    sum[t] += record.final_mean_opinion[t];
                    sum_sq[t] += record.final_mean_opinion[t] * record.final_mean_opinion[t];
                }
            }
            result.runs.push_back(std::move(record));
        }
        if (agg.completed > 0) {
            auto count = static_cast<double>(agg.completed);
            agg.mean_final_opinion.assign(sum.size(), 0.0);
            agg.std_final_opinion.assign(sum.size(), 0.0);
            for (std::size_t t = 0; t < sum.size(); ++t) {
                agg.mean_final_opinion[t] = sum[t] / count;
                if (agg.completed > 1) {
                    double variance =
                        (sum_sq[t] - sum[t] * sum[t] / count) / (count - 1.0);
                    agg.std_final_opinion[t] = std::sqrt(std::max(0.0, variance));
                }
            }
        }
        result.aggregates.push_back(std::move(agg));
    }
    return result;
}

SimParams baseline_params() {
    SimParams params;
    params.n_standard = 50;
    params.topics = 3;
    params.edge.theta = 7;
    params.edge.eps_edge = 0.001;
    params.eps_norm = NormEps(1e-12);
    return params;
}

Variation control_variation() {
    return Variation{"control", baseline_params()};
}

Variation popular_variation(std::size_t count, double rho) {
    Variation v;
    v.params = baseline_params();
    v.params.controllers.assign(count, ControllerSpec::popular(rho));
    v.params.controllers_start_isolated = true;
    v.name = "popular_rho" + std::to_string(static_cast<long long>(rho)) + "_n" +
             std::to_string(count);
    return v;
}

namespace {

std::string trim_number(double value) {
    std::string s = std::to_string(value); // e.g. "0.001000"
    while (s.find('.') != std::string::npos && (s.back() == '0' || s.back() == '.')) {
        bool dot = s.back() == '.';
        s.pop_back();
        if (dot) break;
    }
    return s;
}

} // namespace

Variation strategic_variation(double rho, std::vector<double> goal, double eps_edge) {
    Variation v;
    v.params = baseline_params();
    v.params.edge.eps_edge = eps_edge;
    v.params.controllers = {ControllerSpec::strategic(std::move(goal), rho)};
    v.name = "strategic_rho" + trim_number(rho) + "_eps" + trim_number(eps_edge);
    return v;
}

Variation stubborn_variation(std::vector<double> opinion, double eps_edge) {
    Variation v;
    v.params = baseline_params();
    v.params.edge.eps_edge = eps_edge;
    v.params.controllers = {ControllerSpec::stubborn(std::move(opinion))};
    v.name = "stubborn_eps" + trim_number(eps_edge);
    return v;
}

ExperimentConfig popular_spectrum_config(std::vector<std::uint64_t> seeds, std::size_t horizon) {
    ExperimentConfig config;
    config.name = "popular_spectrum";
    config.seeds = std::move(seeds);
    config.horizon = horizon;
    config.variations.push_back(control_variation());
    for (double rho : {-10.0, 10.0}) {
        for (std::size_t count : {1u, 2u, 5u, 10u, 50u}) {
            config.variations.push_back(popular_variation(count, rho));
        }
    }
    return config;
}

ExperimentConfig strategic_spectrum_config(std::vector<std::uint64_t> seeds, std::size_t horizon) {
    ExperimentConfig config;
    config.name = "strategic_spectrum";
    config.seeds = std::move(seeds);
    config.horizon = horizon;
    config.variations.push_back(control_variation());
    for (double rho : {-100.0, -10.0, -5.0, -2.0, -1.0, 0.0, 1.0, 2.0, 5.0, 10.0, 100.0}) {
        Variation v;
        v.params = baseline_params();
        v.params.controllers = {ControllerSpec::strategic({0.0, 0.0, 0.0}, rho)};
        v.name = "strategic_rho" + trim_number(rho);
        config.variations.push_back(std::move(v));
    }
    return config;
}

ExperimentConfig strategic_vs_stubborn_config(std::vector<std::uint64_t> seeds, std::size_t horizon) {
    ExperimentConfig config;
    config.name = "strategic_vs_stubborn";
    config.seeds = std::move(seeds);
    config.horizon = horizon;
    const std::vector<double> goal{0.0, 0.0, 0.0};
    for (double eps : {0.0, 0.001, 0.01}) {
        config.variations.push_back(stubborn_variation(goal, eps));
        config.variations.push_back(strategic_variation(2.0, goal, eps));
    }
    return config;
}

ExperimentResult popular_spectrum_experiment(std::vector<std::uint64_t> seeds, std::size_t horizon) {
    return seed_sweep(popular_spectrum_config(std::move(seeds), horizon));
}

ExperimentResult strategic_spectrum_experiment(std::vector<std::uint64_t> seeds, std::size_t horizon) {
    return seed_sweep(strategic_spectrum_config(std::move(seeds), horizon));
}

ExperimentResult strategic_vs_stubborn_experiment(std::vector<std::uint64_t> seeds,
                                                  std::size_t horizon) {
    return seed_sweep(strategic_vs_stubborn_config(std::move(seeds), horizon));
}

} // namespace opdyn
