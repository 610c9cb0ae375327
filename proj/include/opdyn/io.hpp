#pragma once

#include <string>
#include <vector>

#include "opdyn/engine.hpp"
#include "opdyn/experiments.hpp"

namespace opdyn {

// Shortest representation that parses back to the identical double; all
// numeric output below is formatted with this so files are byte-stable.
std::string format_double(double value);

// Writes content to path via a temp file in the same directory plus a rename,
// so a crash never leaves a half-written file behind.
void atomic_write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Metrics table. Columns: step, the per-topic standard-agent means, the
// per-topic all-agent means, component_count, mean_degree,
// intra_cluster_dispersion. Rejects an empty trajectory.
std::string metrics_csv_string(const std::vector<StepMetrics>& trajectory);
void write_metrics_csv(const std::vector<StepMetrics>& trajectory, const std::string& path);

// Graphviz snapshot: undirected, one node statement per agent carrying its
// opinion entries, plus a color attribute packing the three topics into RGB
// when there are exactly three.
std::string graph_dot_string(const AdjacencyMatrix& a, const DenseMatrix& opinions);
void export_graph_dot(const AdjacencyMatrix& a, const DenseMatrix& opinions, const std::string& path);

// JSON snapshot {n, edges, opinions} with edges as [i, j] pairs (i < j).
// Opinions survive a round trip exactly.
std::string graph_json_string(const AdjacencyMatrix& a, const DenseMatrix& opinions);
void export_graph_json(const AdjacencyMatrix& a, const DenseMatrix& opinions, const std::string& path);

struct GraphData {
    AdjacencyMatrix adjacency;
    DenseMatrix opinions;
};

GraphData import_graph_json(const std::string& text);

// Ensemble tables. The raw table has one row per (variation, seed) including
// failed runs (status column + quoted error); the aggregate table has one row
// per variation; the JSON document carries both plus the horizon.
std::string experiment_raw_csv_string(const ExperimentResult& result);
std::string experiment_aggregate_csv_string(const ExperimentResult& result);
std::string experiment_result_json_string(const ExperimentResult& result);

} // namespace opdyn
