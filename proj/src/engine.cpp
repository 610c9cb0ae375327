#include "opdyn/engine.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <queue>
#include <stdexcept>
#include <thread>

#include "opdyn/errors.hpp"

namespace opdyn {

namespace {

void validate_opinion_vector(const std::vector<double>& v, std::size_t topics, const char* what) {
    if (v.size() != topics) {
        throw std::invalid_argument(std::string(what) + ": length must equal topic count");
    }
    for (double x : v) {
        if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
            throw std::invalid_argument(std::string(what) + ": entries must lie in [0, 1]");
        }
    }
}

} // namespace

void validate_sim_params(const SimParams& params) {
    if (params.n_standard < 1) {
        throw std::invalid_argument("sim params: need at least one standard agent");
    }
    if (params.topics < 1) {
        throw std::invalid_argument("sim params: need at least one topic");
    }
    validate_edge_params(params.edge);
    for (const ControllerSpec& spec : params.controllers) {
        switch (spec.type) {
        case ControllerType::Stubborn:
            validate_opinion_vector(spec.fixed_opinion, params.topics, "stubborn opinion");
            break;
        case ControllerType::Popular:
            if (!std::isfinite(spec.rho)) {
                throw std::invalid_argument("popular controller: rho must be finite");
            }
            break;
        case ControllerType::Strategic:
            if (!std::isfinite(spec.rho)) {
                throw std::invalid_argument("strategic controller: rho must be finite");
            }
            validate_opinion_vector(spec.goal, params.topics, "strategic goal");
            break;
        }
    }
}

std::vector<std::uint8_t> SimulationState::controller_mask() const {
    std::vector<std::uint8_t> mask(controller_of_agent.size(), 0);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        mask[i] = controller_of_agent[i] >= 0 ? 1 : 0;
    }
    return mask;
}

SimulationState init_network(const SimParams& params, std::uint64_t seed) {
    validate_sim_params(params);
    const std::size_t n = params.n_standard + params.controllers.size();
    const std::size_t m = params.topics;

    SimulationState state;
    state.controllers = params.controllers;
    state.edge = params.edge;
    state.eps_norm = params.eps_norm;
    state.rng = RngStream(seed);
    state.controller_of_agent.assign(n, -1);
    for (std::size_t c = 0; c < params.controllers.size(); ++c) {
        state.controller_of_agent[params.n_standard + c] = static_cast<int>(c);
    }

    state.opinions = DenseMatrix(n, m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        int c = state.controller_of_agent[i];
        if (c >= 0 && state.controllers[static_cast<std::size_t>(c)].type == ControllerType::Stubborn) {
            const auto& fixed = state.controllers[static_cast<std::size_t>(c)].fixed_opinion;
            for (std::size_t t = 0; t < m; ++t) state.opinions(i, t) = fixed[t];
        } else {
            for (std::size_t t = 0; t < m; ++t) state.opinions(i, t) = state.rng.next_uniform();
        }
    }

    if (n == 1) {
        state.adjacency = AdjacencyMatrix(1);
        return state;
    }

    DenseMatrix probs = edge_probabilities(state.opinions, state.edge, state.eps_norm);
    state.adjacency = resample_edges(probs, state.edge, state.controller_mask(), state.rng);
    if (params.controllers_start_isolated) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!state.is_controller(i)) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i && state.adjacency.edge(i, j)) state.adjacency.set_edge(i, j, false);
            }
        }
    }
    return state;
}

SimulationState step(SimulationState state) {
    const std::size_t n = state.agent_count();
    const std::size_t m = state.opinions.cols();

    if (n == 1) { // degenerate network: nothing moves, nothing is drawn
        state.step_index += 1;
        return state;
    }

    // All of this step's inputs come from the pre-step state.
    const DenseMatrix& x = state.opinions;
    DenseMatrix similarity = row_similarity_matrix(x, state.eps_norm);
    DenseMatrix w = weight_matrix_from_similarity(similarity, state.adjacency);
    for (std::size_t i = 0; i < n; ++i) {
        int c = state.controller_of_agent[i];
        if (c >= 0 && state.controllers[static_cast<std::size_t>(c)].type == ControllerType::Stubborn) {
            w = apply_stubborn(std::move(w), i);
        }
    }

    DenseMatrix next = opinion_step(x, w);
    for (std::size_t i = 0; i < n; ++i) {
        int c = state.controller_of_agent[i];
        if (c < 0) continue;
        const ControllerSpec& spec = state.controllers[static_cast<std::size_t>(c)];
        std::vector<double> row;
        switch (spec.type) {
        case ControllerType::Stubborn:
            continue; // already pinned through the weight row
        case ControllerType::Popular:
            row = apply_popular(x, state.adjacency, i, spec.rho, state.eps_norm);
            break;
        case ControllerType::Strategic:
            row = apply_strategic(x, state.adjacency, i, spec.goal, spec.rho, state.eps_norm);
            break;
        }
        for (std::size_t t = 0; t < m; ++t) next(i, t) = row[t];
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < m; ++t) {
            if (!std::isfinite(next(i, t))) {
                throw SimulationError("non-finite opinion at step " +
                                      std::to_string(state.step_index + 1) + ", agent " +
                                      std::to_string(i));
            }
        }
        int c = state.controller_of_agent[i];
        if (c >= 0 && state.controllers[static_cast<std::size_t>(c)].type == ControllerType::Stubborn) {
            const auto& fixed = state.controllers[static_cast<std::size_t>(c)].fixed_opinion;
            if (std::memcmp(next.row(i).data(), fixed.data(), m * sizeof(double)) != 0) {
                throw SimulationError("stubborn row drifted at step " +
                                      std::to_string(state.step_index + 1));
            }
        }
    }

    DenseMatrix probs = edge_probabilities_from_similarity(similarity, state.edge, state.eps_norm);
    state.adjacency = resample_edges(probs, state.edge, state.controller_mask(), state.rng);
    state.opinions = std::move(next);
    state.step_index += 1;
    return state;
}

bool detect_stability(std::span<const double> history, const StabilityCriterion& criterion) {
    if (criterion.window < 1 || !(criterion.tol > 0.0)) {
        throw std::invalid_argument("stability criterion: window >= 1 and tol > 0 required");
    }
    if (history.size() < criterion.window) return false;
    double sum = 0.0;
    for (std::size_t i = history.size() - criterion.window; i < history.size(); ++i) {
        sum += history[i];
    }
    return sum / static_cast<double>(criterion.window) < criterion.tol;
}

RunResult run(SimulationState state, std::size_t steps,
              const std::optional<StabilityCriterion>& criterion) {
    if (steps < 1) {
        throw std::invalid_argument("run: steps must be >= 1");
    }
    RunResult result;
    result.trajectory.reserve(steps);
    std::vector<double> deltas;
    deltas.reserve(steps);

    for (std::size_t s = 0; s < steps; ++s) {
        DenseMatrix previous = state.opinions;
        state = step(std::move(state));

        double delta = 0.0;
        for (std::size_t i = 0; i < previous.data().size(); ++i) {
            delta += std::fabs(state.opinions.data()[i] - previous.data()[i]);
        }
        delta /= static_cast<double>(previous.data().size());
        deltas.push_back(delta);

        result.trajectory.push_back(compute_metrics(state, delta));

        if (criterion && !result.stabilized_at && detect_stability(deltas, *criterion)) {
            result.stabilized_at = state.step_index;
            if (criterion->stop_early) break;
        }
    }
    result.final_state = std::move(state);
    return result;
}

ComponentLabeling connected_components(const AdjacencyMatrix& a) {
    const std::size_t n = a.size();
    ComponentLabeling out;
    out.label.assign(n, 0);
    std::vector<std::uint8_t> seen(n, 0);
    for (std::size_t start = 0; start < n; ++start) {
        if (seen[start]) continue;
        std::queue<std::size_t> frontier;
        frontier.push(start);
        seen[start] = 1;
        while (!frontier.empty()) {
            std::size_t v = frontier.front();
            frontier.pop();
            out.label[v] = out.count;
            for (std::size_t j = 0; j < n; ++j) {
                if (!seen[j] && a.edge(v, j)) {
                    seen[j] = 1;
                    frontier.push(j);
                }
            }
        }
        ++out.count;
    }
    return out;
}

StepMetrics compute_metrics(const SimulationState& state, double mean_abs_delta) {
    const std::size_t n = state.agent_count();
    const std::size_t m = state.opinions.cols();

    StepMetrics metrics;
    metrics.step = state.step_index;
    metrics.mean_abs_delta = mean_abs_delta;
    metrics.mean_opinion_all.assign(m, 0.0);
    std::size_t standard_count = 0;
    std::vector<double> standard_sum(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < m; ++t) {
            metrics.mean_opinion_all[t] += state.opinions(i, t);
        }
        if (!state.is_controller(i)) {
            ++standard_count;
            for (std::size_t t = 0; t < m; ++t) standard_sum[t] += state.opinions(i, t);
        }
    }
    for (std::size_t t = 0; t < m; ++t) metrics.mean_opinion_all[t] /= static_cast<double>(n);
    if (standard_count > 0) {
        metrics.mean_opinion.assign(m, 0.0);
        for (std::size_t t = 0; t < m; ++t) {
            metrics.mean_opinion[t] = standard_sum[t] / static_cast<double>(standard_count);
        }
    } else {
        metrics.mean_opinion = metrics.mean_opinion_all;
    }

    ComponentLabeling components = connected_components(state.adjacency);
    metrics.component_count = components.count;
    metrics.mean_degree =
        static_cast<double>(2 * state.adjacency.edge_count()) / static_cast<double>(n);

    // Mean over components of the members' mean 1-norm distance to their
    // component's opinion centroid; components weigh equally, size aside.
    std::vector<std::vector<double>> centroid(components.count, std::vector<double>(m, 0.0));
    std::vector<std::size_t> size(components.count, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t c = components.label[i];
        ++size[c];
        for (std::size_t t = 0; t < m; ++t) centroid[c][t] += state.opinions(i, t);
    }
    for (std::size_t c = 0; c < components.count; ++c) {
        for (std::size_t t = 0; t < m; ++t) centroid[c][t] /= static_cast<double>(size[c]);
    }
    std::vector<double> spread(components.count, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t c = components.label[i];
        double dist = 0.0;
        for (std::size_t t = 0; t < m; ++t) dist += std::fabs(state.opinions(i, t) - centroid[c][t]);
        spread[c] += dist;
    }
    double total = 0.0;
    for (std::size_t c = 0; c < components.count; ++c) {
        total += spread[c] / static_cast<double>(size[c]);
    }
    metrics.intra_cluster_dispersion = total / static_cast<double>(components.count);
    return metrics;
}

unsigned resolve_thread_count(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("OPINION_SIM_THREADS")) {
        char* end = nullptr;
        unsigned long parsed = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && parsed > 0) {
            return static_cast<unsigned>(parsed);
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

std::vector<RunOutcome> run_batch(const std::vector<RunJob>& jobs, unsigned threads) {
    std::vector<RunOutcome> outcomes(jobs.size());
    if (jobs.empty()) return outcomes;

    unsigned worker_count = std::min<unsigned>(resolve_thread_count(threads),
                                               static_cast<unsigned>(jobs.size()));
    std::atomic<std::size_t> cursor{0};
    auto work = [&] {
        while (true) {
            std::size_t idx = cursor.fetch_add(1);
            if (idx >= jobs.size()) break;
            RunOutcome& out = outcomes[idx];
            try {
                SimulationState state = init_network(jobs[idx].params, jobs[idx].seed);
                out.result = run(std::move(state), jobs[idx].steps, jobs[idx].criterion);
                out.ok = true;
            } catch (const std::exception& e) {
                out.ok = false;
                out.error = e.what();
            }
        }
    };

    if (worker_count <= 1) {
        work();
        return outcomes;
    }
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (unsigned i = 0; i < worker_count; ++i) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
    return outcomes;
}

} // namespace opdyn
