#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opdyn/engine.hpp"

namespace opdyn {

// A named variation of a base setup. Horizon lives on the experiment: every
// variation in one experiment runs the same number of steps.
struct Variation {
    std::string name;
    SimParams params;
};

struct ExperimentConfig {
    std::string name;
    std::vector<Variation> variations;
    std::vector<std::uint64_t> seeds;
    std::size_t horizon = 180;
};

// One (variation, seed) outcome. Failures stay in the table with ok = false
// and the error text; they never disappear from the result.
struct RunRecord {
    std::string variation;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    std::vector<double> final_mean_opinion;     // standard agents only
    std::vector<double> final_mean_opinion_all; // everyone
    std::size_t final_component_count = 0;
    double final_mean_degree = 0.0;
    double final_dispersion = 0.0;
    std::vector<StepMetrics> trajectory;
};

// Across-seed summary of one variation, over completed runs only.
struct VariationAggregate {
    std::string variation;
    std::size_t completed = 0;
    std::size_t failed = 0;
    std::vector<double> mean_final_opinion; // per topic
    std::vector<double> std_final_opinion;  // per topic, sample std
};

struct ExperimentResult {
    std::string name;
    std::size_t horizon = 0;
    std::vector<RunRecord> runs;           // variation-major, then seed order
    std::vector<VariationAggregate> aggregates;
};

// Runs every variation over every seed (in parallel; see OPINION_SIM_THREADS)
// and aggregates. Rejects an empty seed list.
ExperimentResult seed_sweep(const ExperimentConfig& config);

// The shared 50-agent, 3-topic baseline every named experiment varies.
SimParams baseline_params();

// Variation builders, exposed so tests can run exactly the pieces they need.
// Popular spectra start their controllers fully disconnected; the crowd has
// to discover them through resampling.
Variation control_variation();
Variation popular_variation(std::size_t count, double rho);
Variation strategic_variation(double rho, std::vector<double> goal, double eps_edge);
Variation stubborn_variation(std::vector<double> opinion, double eps_edge);

// Crowd-pleasing vs fringe-chasing popular agents at several crowd sizes:
// control plus counts {1, 2, 5, 10, 50} for rho in {-10, +10}.
ExperimentConfig popular_spectrum_config(std::vector<std::uint64_t> seeds, std::size_t horizon = 180);

// One strategic agent aiming at [0, 0, 0] across a symmetric rho grid
// {0, ±1, ±2, ±5, ±10, ±100}, plus control.
ExperimentConfig strategic_spectrum_config(std::vector<std::uint64_t> seeds, std::size_t horizon = 180);

// Stubborn vs strategic (rho = 2), both targeting [0, 0, 0], across
// eps_edge in {0, 0.001, 0.01}; long horizon so slow influence can show up.
ExperimentConfig strategic_vs_stubborn_config(std::vector<std::uint64_t> seeds,
                                              std::size_t horizon = 3500);

ExperimentResult popular_spectrum_experiment(std::vector<std::uint64_t> seeds,
                                             std::size_t horizon = 180);
ExperimentResult strategic_spectrum_experiment(std::vector<std::uint64_t> seeds,
                                               std::size_t horizon = 180);
ExperimentResult strategic_vs_stubborn_experiment(std::vector<std::uint64_t> seeds,
                                                  std::size_t horizon = 3500);

} // namespace opdyn
