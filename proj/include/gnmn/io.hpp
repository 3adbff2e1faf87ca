#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gnmn/graph.hpp"
#include "gnmn/harness.hpp"
#include "gnmn/metrics.hpp"

namespace gnmn {

using Json = nlohmann::ordered_json;

// ---- configuration -------------------------------------------------------

/// Base class for configuration problems. key_path() names the offending
/// key ("p_stat", "sweep.values[2]"), empty when the whole file is at fault.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, std::string key_path)
        : std::runtime_error(message), key_path_(std::move(key_path)) {}
    const std::string& key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

/// Missing or unreadable file.
class ConfigFileError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Not valid JSON, or not a JSON object at the top level.
class ConfigSyntaxError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Key not in the schema.
class ConfigKeyError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Wrong type or a violated constraint.
class ConfigValueError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

struct ConfigFile {
    SimulationConfig config;
    std::optional<SweepSpec> sweep;
};

/// Schema: n, dimensions, r, velocity, t_rest, t_move, p_stat, n_moves,
/// seed, metrics_each_phase, and sweep {parameter, values, seeds} where
/// seeds is a replicate count or an explicit list of replicate ids. Absent
/// keys take the SimulationConfig defaults; an absent n_moves becomes
/// min(100, n).
ConfigFile load_config(const std::filesystem::path& path);
ConfigFile parse_config(const Json& doc);
ConfigFile parse_config_text(std::string_view text);

Json config_to_json(const SimulationConfig& config);
Json config_file_to_json(const ConfigFile& file);

/// 16 hex digits of FNV-1a over the canonical config JSON.
std::string config_hash(const SimulationConfig& config);

// ---- tables --------------------------------------------------------------

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

struct MetricsRow {
    std::string parameter;        ///< swept parameter, "none" for single runs
    std::optional<double> value;  ///< swept value
    RunSummary run;
};

inline constexpr std::string_view kMetricsCsvHeader =
    "parameter,value,seed,mean_degree,second_hop_total,new_connection_nodes,"
    "degree_centrality_mean,betweenness_mean,component_count,giant_fraction,"
    "avg_shortest_path,pred_mean_degree,pred_second_hop_p,pred_betweenness,pred_avg_path";

std::vector<MetricsRow> metrics_rows(const SweepReport& report);
std::vector<MetricsRow> metrics_rows(const RunSummary& run);

std::string metrics_csv(std::span<const MetricsRow> rows);
void write_metrics_csv(std::span<const MetricsRow> rows, const std::filesystem::path& path);

Json prediction_to_json(const Prediction& p);
Json comparison_to_json(const Comparison& c);
Json metrics_to_json(const MetricsReport& report);
Json sweep_to_json(const SweepReport& report);
void write_sweep_json(const SweepReport& report, const std::filesystem::path& path);

/// Writes text to path, creating parent directories. Throws
/// std::runtime_error when the file cannot be written.
void write_text(const std::filesystem::path& path, std::string_view text);
void write_json(const std::filesystem::path& path, const Json& doc);

// ---- graphs --------------------------------------------------------------

/// Extra node/graph data carried by exported snapshots.
struct GraphAnnotations {
    std::string config_hash;
    std::vector<NodeId> second_hop_sources;  ///< flagged per node as "source"
};

struct StoredGraph {
    GraphSnapshot snapshot;
    GraphAnnotations annotations;
};

/// GraphML with graph data r, phase, region extents and config_hash, and
/// node data x, y (z for 3-D), degree, component_id, source. Each
/// undirected edge appears once with source < target.
std::string graphml_text(const GraphSnapshot& g, const GraphAnnotations& notes = {});
void export_graphml(const GraphSnapshot& g, const std::filesystem::path& path,
                    const GraphAnnotations& notes = {});

/// Reads files written by export_graphml. Throws std::runtime_error on
/// malformed input.
StoredGraph import_graphml(const std::filesystem::path& path);
StoredGraph parse_graphml(const std::string& text);

/// Node classes used for snapshot colouring.
enum class NodeClass { moved, gained, isolated, plain };

/// Highest-precedence class: moved > gained > isolated > plain.
NodeClass primary_class(const StepDelta& delta, NodeId node);

struct SvgOptions {
    double width_px = 800.0;
    double margin_px = 20.0;
    double node_radius_px = 2.0;
    std::string config_hash;
};

/// Edges of the new snapshot in grey, an arrow from old to new position for
/// every moved node, then nodes coloured red (moved), green (gained), blue
/// (isolated) or grey. Every node also carries its full class list in a
/// data-classes attribute.
std::string snapshot_svg(const GraphSnapshot& before, const GraphSnapshot& after,
                         const StepDelta& delta, const SvgOptions& options = {});
void export_snapshot_svg(const GraphSnapshot& before, const GraphSnapshot& after,
                         const StepDelta& delta, const std::filesystem::path& path,
                         const SvgOptions& options = {});

}  // namespace gnmn
