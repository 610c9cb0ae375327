#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opdyn/engine.hpp"
#include "opdyn/errors.hpp"

namespace opdyn {

// Where a run writes and which artifacts it emits. "csv" is the metrics
// table, "dot" and "json" are graph snapshots of the initial and final state.
struct OutputSpec {
    std::string dir = ".";
    std::vector<std::string> formats = {"csv", "dot", "json"};

    bool operator==(const OutputSpec&) const = default;
};

// One config-level controller entry; count expands to that many agents.
struct ControllerGroup {
    std::string type; // "stubborn" | "popular" | "strategic"
    std::size_t count = 1;
    double rho = 0.0;
    std::vector<double> goal;    // strategic only
    std::vector<double> opinion; // stubborn only

    bool operator==(const ControllerGroup&) const = default;
};

// Parsed run configuration with defaults applied. Field names match the JSON
// schema; m is the topic count.
struct RunConfig {
    std::size_t n_standard = 0;
    std::size_t m = 0;
    int theta = 0;
    std::size_t steps = 0;
    std::uint64_t seed = 0;
    double eps_edge = 0.001;
    double eps_norm = 1e-12;
    std::vector<ControllerGroup> controllers;
    std::optional<StabilityCriterion> stability;
    std::optional<OutputSpec> output;

    bool operator==(const RunConfig&) const = default;
};

// Parses and fully validates config JSON. Unknown keys anywhere are schema
// errors; malformed JSON is a syntax error; well-typed values outside their
// bounds are range errors. Error messages carry the offending key path.
RunConfig parse_config(const std::string& text);

// Reads the file and parses it. File-system problems throw IoError.
RunConfig load_config_file(const std::string& path);

// Canonical JSON for a config; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

// Expands controller groups into per-agent specs and packs the simulation
// parameters the engine wants.
SimParams to_sim_params(const RunConfig& config);

} // namespace opdyn
