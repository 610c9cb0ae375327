#include "opdyn/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

#include "opdyn/errors.hpp"

namespace opdyn {

std::string format_double(double value) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return {buf, ptr};
}

void atomic_write_file(const std::string& path, const std::string& content) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open for writing: " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw IoError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("rename failed: " + target.string() + " (" + ec.message() + ")");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open for reading: " + path);
    }
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failed: " + path);
    }
    return content;
}

std::string metrics_csv_string(const std::vector<StepMetrics>& trajectory) {
    if (trajectory.empty()) {
        throw std::invalid_argument("metrics_csv_string: trajectory is empty");
    }
    const std::size_t m = trajectory.front().mean_opinion.size();
    std::string out;
    out += "step";
    for (std::size_t t = 0; t < m; ++t) out += ",mean_op_" + std::to_string(t);
    for (std::size_t t = 0; t < m; ++t) out += ",mean_op_all_" + std::to_string(t);
    out += ",component_count,mean_degree,intra_cluster_dispersion\n";
    for (const StepMetrics& row : trajectory) {
        if (row.mean_opinion.size() != m || row.mean_opinion_all.size() != m) {
            throw std::invalid_argument("metrics_csv_string: inconsistent topic counts");
        }
        out += std::to_string(row.step);
        for (std::size_t t = 0; t < m; ++t) out += "," + format_double(row.mean_opinion[t]);
        for (std::size_t t = 0; t < m; ++t) out += "," + format_double(row.mean_opinion_all[t]);
        out += "," + std::to_string(row.component_count);
        out += "," + format_double(row.mean_degree);
        out += "," + format_double(row.intra_cluster_dispersion);
        out += "\n";
    }
    return out;
}

void write_metrics_csv(const std::vector<StepMetrics>& trajectory, const std::string& path) {
    atomic_write_file(path, metrics_csv_string(trajectory));
}

namespace {

std::string rgb_hex(std::span<const double> opinion) {
    char buf[8];
    auto channel = [](double v) {
        return static_cast<unsigned>(std::lround(std::min(1.0, std::max(0.0, v)) * 255.0));
    };
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", channel(opinion[0]), channel(opinion[1]),
                  channel(opinion[2]));
    return buf;
}

} // namespace

std::string graph_dot_string(const AdjacencyMatrix& a, const DenseMatrix& opinions) {
    if (a.size() != opinions.rows()) {
        throw std::invalid_argument("graph_dot_string: graph size and opinion rows differ");
    }
    const std::size_t m = opinions.cols();
    std::string out = "graph opinion_network {\n";
    out += "  node [shape=circle, style=filled];\n";
    for (std::size_t i = 0; i < a.size(); ++i) {
        out += "  " + std::to_string(i) + " [";
        for (std::size_t t = 0; t < m; ++t) {
            if (t > 0) out += ", ";
            out += "opinion_" + std::to_string(t) + "=" + format_double(opinions(i, t));
        }
        if (m == 3) {
            out += ", color=\"" + rgb_hex(opinions.row(i)) + "\"";
        }
        out += "];\n";
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            if (a.edge(i, j)) {
                out += "  " + std::to_string(i) + " -- " + std::to_string(j) + ";\n";
            }
        }
    }
    out += "}\n";
    return out;
}

void export_graph_dot(const AdjacencyMatrix& a, const DenseMatrix& opinions, const std::string& path) {
    atomic_write_file(path, graph_dot_string(a, opinions));
}

std::string graph_json_string(const AdjacencyMatrix& a, const DenseMatrix& opinions) {
    if (a.size() != opinions.rows()) {
        throw std::invalid_argument("graph_json_string: graph size and opinion rows differ");
    }
    nlohmann::ordered_json j;
    j["n"] = a.size();
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& [i, k] : a.edges()) {
        j["edges"].push_back({i, k});
    }
    j["opinions"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < opinions.rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t t = 0; t < opinions.cols(); ++t) row.push_back(opinions(i, t));
        j["opinions"].push_back(std::move(row));
    }
    return j.dump();
}

void export_graph_json(const AdjacencyMatrix& a, const DenseMatrix& opinions, const std::string& path) {
    atomic_write_file(path, graph_json_string(a, opinions));
}

namespace {

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"'; // double embedded quotes
        out += c;
    }
    out += "\"";
    return out;
}

std::size_t result_topic_count(const ExperimentResult& result) {
    for (const RunRecord& record : result.runs) {
        if (record.ok) return record.final_mean_opinion.size();
    }
    return 0;
}

} // namespace

std::string experiment_raw_csv_string(const ExperimentResult& result) {
    const std::size_t m = result_topic_count(result);
    std::string out = "variation,seed,status,error";
    for (std::size_t t = 0; t < m; ++t) out += ",final_mean_op_" + std::to_string(t);
    for (std::size_t t = 0; t < m; ++t) out += ",final_mean_op_all_" + std::to_string(t);
    out += ",final_component_count,final_mean_degree,final_dispersion\n";
    for (const RunRecord& record : result.runs) {
        out += csv_quote(record.variation) + "," + std::to_string(record.seed);
        if (!record.ok) {
            out += ",error," + csv_quote(record.error);
            for (std::size_t t = 0; t < 2 * m + 3; ++t) out += ",";
            out += "\n";
            continue;
        }
        out += ",ok,\"\"";
        for (std::size_t t = 0; t < m; ++t) out += "," + format_double(record.final_mean_opinion[t]);
        for (std::size_t t = 0; t < m; ++t) {
            out += "," + format_double(record.final_mean_opinion_all[t]);
        }
        out += "," + std::to_string(record.final_component_count);
        out += "," + format_double(record.final_mean_degree);
        out += "," + format_double(record.final_dispersion);
        out += "\n";
    }
    return out;
}

std::string experiment_aggregate_csv_string(const ExperimentResult& result) {
    const std::size_t m = result_topic_count(result);
    std::string out = "variation,completed,failed";
    for (std::size_t t = 0; t < m; ++t) out += ",mean_final_op_" + std::to_string(t);
    for (std::size_t t = 0; t < m; ++t) out += ",std_final_op_" + std::to_string(t);
    out += "\n";
    for (const VariationAggregate& agg : result.aggregates) {
        out += csv_quote(agg.variation) + "," + std::to_string(agg.completed) + "," +
               std::to_string(agg.failed);
        for (std::size_t t = 0; t < m; ++t) {
            out += ",";
            if (t < agg.mean_final_opinion.size()) out += format_double(agg.mean_final_opinion[t]);
        }
        for (std::size_t t = 0; t < m; ++t) {
            out += ",";
            if (t < agg.std_final_opinion.size()) out += format_double(agg.std_final_opinion[t]);
        }
        out += "\n";
    }
    return out;
}

std::string experiment_result_json_string(const ExperimentResult& result) {
    nlohmann::ordered_json j;
    j["name"] = result.name;
    j["horizon"] = result.horizon;
    j["variations"] = nlohmann::ordered_json::array();
    for (const VariationAggregate& agg : result.aggregates) {
        nlohmann::ordered_json v;
        v["name"] = agg.variation;
        v["completed"] = agg.completed;
        v["failed"] = agg.failed;
        v["mean_final_opinion"] = agg.mean_final_opinion;
        v["std_final_opinion"] = agg.std_final_opinion;
        j["variations"].push_back(std::move(v));
    }
    j["runs"] = nlohmann::ordered_json::array();
    for (const RunRecord& record : result.runs) {
        nlohmann::ordered_json r;
        r["variation"] = record.variation;
        r["seed"] = record.seed;
        r["ok"] = record.ok;
        if (!record.ok) {
            r["error"] = record.error;
        } else {
            r["final_mean_opinion"] = record.final_mean_opinion;
            r["final_mean_opinion_all"] = record.final_mean_opinion_all;
            r["final_component_count"] = record.final_component_count;
            r["final_mean_degree"] = record.final_mean_degree;
            r["final_dispersion"] = record.final_dispersion;
        }
        j["runs"].push_back(std::move(r));
    }
    return j.dump(2) + "\n";
}

GraphData import_graph_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("graph json: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("edges") || !j.contains("opinions")) {
        throw std::invalid_argument("graph json: need object with n, edges, opinions");
    }
    if (!j["n"].is_number_unsigned()) {
        throw std::invalid_argument("graph json: n must be a non-negative integer");
    }
    const auto n = j["n"].get<std::size_t>();
    if (!j["opinions"].is_array() || j["opinions"].size() != n) {
        throw std::invalid_argument("graph json: opinions must be an array of n rows");
    }

    GraphData data;
    data.adjacency = AdjacencyMatrix(n);
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = j["opinions"][i];
        if (!row.is_array() || (i > 0 && row.size() != m)) {
            throw std::invalid_argument("graph json: opinion rows must share one length");
        }
        if (i == 0) {
            m = row.size();
            data.opinions = DenseMatrix(n, m, 0.0);
        }
        for (std::size_t t = 0; t < m; ++t) {
            if (!row[t].is_number()) {
                throw std::invalid_argument("graph json: opinions must be numbers");
            }
            double v = row[t].get<double>();
            if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
                throw std::invalid_argument("graph json: opinions must lie in [0, 1]");
            }
            data.opinions(i, t) = v;
        }
    }
    if (!j["edges"].is_array()) {
        throw std::invalid_argument("graph json: edges must be an array");
    }
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() ||
            !e[1].is_number_unsigned()) {
            throw std::invalid_argument("graph json: each edge must be a pair of indices");
        }
        auto i = e[0].get<std::size_t>();
        auto k = e[1].get<std::size_t>();
        if (i >= k || k >= n) {
            throw std::invalid_argument("graph json: edge indices must satisfy i < j < n");
        }
        data.adjacency.set_edge(i, k, true);
    }
    return data;
}

} // namespace opdyn
