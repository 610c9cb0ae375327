#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opdyn/controllers.hpp"
#include "opdyn/matrix_ops.hpp"
#include "opdyn/network.hpp"

namespace opdyn {

// Everything needed to build an initial network. Controller entries each
// describe one controller agent; controller agents take the indices after the
// standard agents, in list order.
struct SimParams {
    std::size_t n_standard = 50;
    std::size_t topics = 3;
    EdgeParams edge;
    NormEps eps_norm;
    std::vector<ControllerSpec> controllers;
    // Start controllers with no edges at all (they still get discovered
    // through resampling). Off by default: normally the initial draw treats
    // controller-standard pairs like any other pair.
    bool controllers_start_isolated = false;
};

void validate_sim_params(const SimParams& params);

// Full mutable state of one run. step() consumes and returns it by value;
// the embedded RngStream is the only source of randomness.
struct SimulationState {
    DenseMatrix opinions; // n x topics
    AdjacencyMatrix adjacency;
    std::vector<int> controller_of_agent; // -1 for standard agents
    std::vector<ControllerSpec> controllers;
    EdgeParams edge;
    NormEps eps_norm;
    std::uint64_t step_index = 0;
    RngStream rng{0};

    bool is_controller(std::size_t i) const { return controller_of_agent[i] >= 0; }
    std::size_t agent_count() const { return opinions.rows(); }
    std::vector<std::uint8_t> controller_mask() const;
};

// Per-step observables. mean_opinion averages standard agents only (the
// headline series); mean_opinion_all includes controllers. When a network has
// no standard agents the two coincide.
struct StepMetrics {
    std::uint64_t step = 0;
    std::vector<double> mean_opinion;
    std::vector<double> mean_opinion_all;
    std::size_t component_count = 0;
    double mean_degree = 0.0;
    double intra_cluster_dispersion = 0.0;
    double mean_abs_delta = 0.0; // mean |opinion change| per entry this step
};

// A run counts as stabilized when the mean absolute opinion change, averaged
// over the trailing window, drops below tol. Detection only marks the step;
// the run keeps going unless stop_early is set.
struct StabilityCriterion {
    double tol = 1e-4;
    std::size_t window = 20;
    bool stop_early = false;

    bool operator==(const StabilityCriterion&) const = default;
};

struct RunResult {
    std::vector<StepMetrics> trajectory; // one entry per executed step
    SimulationState final_state;
    std::optional<std::uint64_t> stabilized_at;
};

// Builds the initial state: standard, popular and strategic agents get i.i.d.
// uniform opinions drawn agent-by-agent, topic-by-topic; stubborn agents get
// their fixed opinion without consuming draws. The initial graph comes from
// one edge_probabilities + resample_edges pass over the initial opinions.
SimulationState init_network(const SimParams& params, std::uint64_t seed);

// Advances one step: weights from the current opinions and graph (stubborn
// rows pinned), synchronous opinion update, popular/strategic rows overwritten
// from current-state blends, then the whole graph resampled from the
// current-state similarities. Throws SimulationError if opinions go
// non-finite or a stubborn row drifts.
SimulationState step(SimulationState state);

// Runs `steps` steps (must be >= 1), recording metrics after each.
RunResult run(SimulationState state, std::size_t steps,
              const std::optional<StabilityCriterion>& criterion = std::nullopt);

// True once the trailing `window` entries of history average below tol.
// History shorter than the window is never stable.
bool detect_stability(std::span<const double> history, const StabilityCriterion& criterion);

struct ComponentLabeling {
    std::vector<std::size_t> label; // per vertex, 0-based, in discovery order
    std::size_t count = 0;
};

ComponentLabeling connected_components(const AdjacencyMatrix& a);

// Metrics for the state as it stands; mean_abs_delta is whatever the caller
// knows about the last transition (0 for a freshly built network).
StepMetrics compute_metrics(const SimulationState& state, double mean_abs_delta = 0.0);

// ---- batch running ----------------------------------------------------

struct RunJob {
    SimParams params;
    std::uint64_t seed = 0;
    std::size_t steps = 1;
    std::optional<StabilityCriterion> criterion;
};

struct RunOutcome {
    bool ok = false;
    std::string error;
    RunResult result; // meaningful only when ok
};

// Independent jobs executed on a small thread pool; outcomes keep job order.
// threads = 0 means "decide from OPINION_SIM_THREADS, else hardware".
std::vector<RunOutcome> run_batch(const std::vector<RunJob>& jobs, unsigned threads = 0);

// Thread-count policy shared by everything that fans out work.
unsigned resolve_thread_count(unsigned requested = 0);

} // namespace opdyn
