#include "opdyn/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "opdyn/io.hpp"

namespace opdyn {

ConfigError::ConfigError(ConfigErrorKind kind, std::string path, const std::string& message)
    : std::runtime_error(path.empty() ? message : "at '" + path + "': " + message),
      kind_(kind),
      path_(std::move(path)) {}

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& prefix) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw ConfigError(ConfigErrorKind::Schema,
                              prefix.empty() ? item.key() : prefix + "." + item.key(),
                              "unknown key");
        }
    }
}

const json& require_key(const json& obj, const std::string& key, const std::string& prefix) {
    if (!obj.contains(key)) {
        throw ConfigError(ConfigErrorKind::Schema, prefix.empty() ? key : prefix + "." + key,
                          "missing required key");
    }
    return obj.at(key);
}

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

std::uint64_t parse_uint(const json& v, const std::string& path, std::uint64_t min_value) {
    if (!v.is_number_integer()) {
        throw ConfigError(ConfigErrorKind::Schema, path, "expected an integer");
    }
    if (v.is_number_integer() && !v.is_number_unsigned()) {
        throw ConfigError(ConfigErrorKind::Range, path, "must be non-negative");
    }
    auto value = v.get<std::uint64_t>();
    if (value < min_value) {
        throw ConfigError(ConfigErrorKind::Range, path,
                          "must be >= " + std::to_string(min_value));
    }
    return value;
}

double parse_real(const json& v, const std::string& path) {
    if (!v.is_number()) {
        throw ConfigError(ConfigErrorKind::Schema, path, "expected a number");
    }
    double value = v.get<double>();
    if (!std::isfinite(value)) {
        throw ConfigError(ConfigErrorKind::Range, path, "must be finite");
    }
    return value;
}

std::vector<double> parse_unit_vector(const json& v, std::size_t m, const std::string& path) {
    if (!v.is_array() || v.size() != m) {
        throw ConfigError(ConfigErrorKind::Schema, path,
                          "expected an array of length " + std::to_string(m));
    }
    std::vector<double> out;
    out.reserve(m);
    for (std::size_t t = 0; t < m; ++t) {
        double value = parse_real(v[t], path + "[" + std::to_string(t) + "]");
        if (value < 0.0 || value > 1.0) {
            throw ConfigError(ConfigErrorKind::Range, path + "[" + std::to_string(t) + "]",
                              "must lie in [0, 1]");
        }
        out.push_back(value);
    }
    return out;
}

ControllerGroup parse_controller(const json& v, std::size_t m, const std::string& path) {
    if (!v.is_object()) {
        throw ConfigError(ConfigErrorKind::Schema, path, "expected an object");
    }
    ControllerGroup group;
    const json& type = require_key(v, "type", path);
    if (!type.is_string()) {
        throw ConfigError(ConfigErrorKind::Schema, join(path, "type"), "expected a string");
    }
    group.type = type.get<std::string>();

    if (group.type == "stubborn") {
        reject_unknown_keys(v, {"type", "count", "opinion"}, path);
        group.opinion = parse_unit_vector(require_key(v, "opinion", path), m, join(path, "opinion"));
    } else if (group.type == "popular") {
        reject_unknown_keys(v, {"type", "count", "rho"}, path);
        group.rho = parse_real(require_key(v, "rho", path), join(path, "rho"));
    } else if (group.type == "strategic") {
        reject_unknown_keys(v, {"type", "count", "rho", "goal"}, path);
        group.rho = parse_real(require_key(v, "rho", path), join(path, "rho"));
        group.goal = parse_unit_vector(require_key(v, "goal", path), m, join(path, "goal"));
    } else {
        throw ConfigError(ConfigErrorKind::Schema, join(path, "type"),
                          "must be one of stubborn, popular, strategic");
    }
    group.count = static_cast<std::size_t>(
        parse_uint(require_key(v, "count", path), join(path, "count"), 1));
    return group;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(ConfigErrorKind::Syntax, "", e.what());
    }
    if (!root.is_object()) {
        throw ConfigError(ConfigErrorKind::Schema, "", "top level must be an object");
    }
    reject_unknown_keys(root,
                        {"n_standard", "m", "theta", "steps", "seed", "eps_edge", "eps_norm",
                         "controllers", "stability", "output"},
                        "");

    RunConfig config;
    config.n_standard = static_cast<std::size_t>(parse_uint(require_key(root, "n_standard", ""), "n_standard", 1));
    config.m = static_cast<std::size_t>(parse_uint(require_key(root, "m", ""), "m", 1));
    config.theta = static_cast<int>(parse_uint(require_key(root, "theta", ""), "theta", 1));
    config.steps = static_cast<std::size_t>(parse_uint(require_key(root, "steps", ""), "steps", 1));
    config.seed = parse_uint(require_key(root, "seed", ""), "seed", 0);

    if (root.contains("eps_edge")) {
        config.eps_edge = parse_real(root["eps_edge"], "eps_edge");
        if (config.eps_edge < 0.0 || config.eps_edge >= 1.0) {
            throw ConfigError(ConfigErrorKind::Range, "eps_edge", "must lie in [0, 1)");
        }
    }
    if (root.contains("eps_norm")) {
        config.eps_norm = parse_real(root["eps_norm"], "eps_norm");
        if (!(config.eps_norm > 0.0) || config.eps_norm > 1e-6) {
            throw ConfigError(ConfigErrorKind::Range, "eps_norm", "must lie in (0, 1e-6]");
        }
    }

    const json& controllers = require_key(root, "controllers", "");
    if (!controllers.is_array()) {
        throw ConfigError(ConfigErrorKind::Schema, "controllers", "expected an array");
    }
    for (std::size_t i = 0; i < controllers.size(); ++i) {
        config.controllers.push_back(
            parse_controller(controllers[i], config.m, "controllers[" + std::to_string(i) + "]"));
    }

    if (root.contains("stability")) {
        const json& st = root["stability"];
        if (!st.is_object()) {
            throw ConfigError(ConfigErrorKind::Schema, "stability", "expected an object");
        }
        reject_unknown_keys(st, {"tol", "window", "stop_early"}, "stability");
        StabilityCriterion criterion;
        if (st.contains("tol")) {
            criterion.tol = parse_real(st["tol"], "stability.tol");
            if (!(criterion.tol > 0.0)) {
                throw ConfigError(ConfigErrorKind::Range, "stability.tol", "must be > 0");
            }
        }
        if (st.contains("window")) {
            criterion.window = static_cast<std::size_t>(parse_uint(st["window"], "stability.window", 1));
        }
        if (st.contains("stop_early")) {
            if (!st["stop_early"].is_boolean()) {
                throw ConfigError(ConfigErrorKind::Schema, "stability.stop_early",
                                  "expected a boolean");
            }
            criterion.stop_early = st["stop_early"].get<bool>();
        }
        config.stability = criterion;
    }

    if (root.contains("output")) {
        const json& out = root["output"];
        if (!out.is_object()) {
            throw ConfigError(ConfigErrorKind::Schema, "output", "expected an object");
        }
        reject_unknown_keys(out, {"dir", "formats"}, "output");
        OutputSpec spec;
        if (out.contains("dir")) {
            if (!out["dir"].is_string()) {
                throw ConfigError(ConfigErrorKind::Schema, "output.dir", "expected a string");
            }
            spec.dir = out["dir"].get<std::string>();
        }
        if (out.contains("formats")) {
            if (!out["formats"].is_array()) {
                throw ConfigError(ConfigErrorKind::Schema, "output.formats", "expected an array");
            }
            spec.formats.clear();
            for (std::size_t i = 0; i < out["formats"].size(); ++i) {
                const json& f = out["formats"][i];
                std::string p = "output.formats[" + std::to_string(i) + "]";
                if (!f.is_string()) {
                    throw ConfigError(ConfigErrorKind::Schema, p, "expected a string");
                }
                std::string name = f.get<std::string>();
                if (name != "csv" && name != "dot" && name != "json") {
                    throw ConfigError(ConfigErrorKind::Schema, p,
                                      "must be one of csv, dot, json");
                }
                spec.formats.push_back(std::move(name));
            }
        }
        config.output = spec;
    }
    return config;
}

RunConfig load_config_file(const std::string& path) {
    return parse_config(read_file(path));
}

std::string serialize_config(const RunConfig& config) {
    nlohmann::ordered_json root;
    root["n_standard"] = config.n_standard;
    root["m"] = config.m;
    root["theta"] = config.theta;
    root["steps"] = config.steps;
    root["seed"] = config.seed;
    root["eps_edge"] = config.eps_edge;
    root["eps_norm"] = config.eps_norm;
    root["controllers"] = nlohmann::ordered_json::array();
    for (const ControllerGroup& group : config.controllers) {
        nlohmann::ordered_json g;
        g["type"] = group.type;
        g["count"] = group.count;
        if (group.type == "popular" || group.type == "strategic") g["rho"] = group.rho;
        if (group.type == "strategic") g["goal"] = group.goal;
        if (group.type == "stubborn") g["opinion"] = group.opinion;
        root["controllers"].push_back(std::move(g));
    }
    if (config.stability) {
        root["stability"] = {{"tol", config.stability->tol},
                             {"window", config.stability->window},
                             {"stop_early", config.stability->stop_early}};
    }
    if (config.output) {
        root["output"] = {{"dir", config.output->dir}, {"formats", config.output->formats}};
    }
    return root.dump(2) + "\n";
}

SimParams to_sim_params(const RunConfig& config) {
    SimParams params;
    params.n_standard = config.n_standard;
    params.topics = config.m;
    params.edge.theta = config.theta;
    params.edge.eps_edge = config.eps_edge;
    params.eps_norm = NormEps(config.eps_norm);
    for (const ControllerGroup& group : config.controllers) {
        ControllerSpec spec;
        if (group.type == "stubborn") {
            spec = ControllerSpec::stubborn(group.opinion);
        } else if (group.type == "popular") {
            spec = ControllerSpec::popular(group.rho);
        } else {
            spec = ControllerSpec::strategic(group.goal, group.rho);
        }
        params.controllers.insert(params.controllers.end(), group.count, spec);
    }
    return params;
}

} // namespace opdyn
