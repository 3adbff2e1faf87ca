#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gnmn/analytics.hpp"
#include "gnmn/geometry.hpp"
#include "gnmn/graph.hpp"
#include "gnmn/metrics.hpp"
#include "gnmn/mobility.hpp"

namespace gnmn {

/// Everything that identifies one experiment. Defaults reproduce the
/// reference parameter set: 2000 nodes in a 12 x 12 square, r = 0.65,
/// v = 0.5, t_rest = 10, 20 movement phases, p_stat = 0.8, 100 movers.
struct SimulationConfig {
    std::size_t n = 2000;
    std::vector<double> dimensions{12.0, 12.0};
    double r = 0.65;
    double velocity = 0.5;
    std::size_t t_rest = 10;
    std::size_t t_move = 20;
    double p_stat = 0.8;
    std::size_t n_moves = 100;
    std::uint64_t seed = 1;
    bool metrics_each_phase = false;

    /// Throws UsageError on the first violated constraint.
    void validate() const;

    Region region() const { return Region(dimensions); }
    MobilityParams mobility() const;

    bool operator==(const SimulationConfig&) const = default;
};

struct RunOptions {
    unsigned threads = 1;
    bool keep_snapshots = false;  ///< keep every phase, not just first and last
    std::optional<std::size_t> path_sample_pairs;
};

struct PhaseRecord {
    std::size_t phase = 0;  ///< 1-based
    StepDelta delta;
    MovementDiagnostics mobility;
    std::size_t ever_moved = 0;  ///< distinct nodes moved in phases 1..phase
    std::optional<MetricsReport> metrics;
};

struct SimulationTrace {
    SimulationConfig config;
    GraphSnapshot initial;
    GraphSnapshot final_snapshot;
    std::vector<GraphSnapshot> snapshots;  ///< phases 0..t_move when kept
    std::vector<PhaseRecord> phases;
    /// Nodes moved at least once during the run, ascending. These are the
    /// second-hop sources of the final report.
    std::vector<NodeId> ever_moved;
    MetricsReport final_metrics;
    Prediction prediction;
    Comparison comparison;
};

/// Placement, initial graph, then t_move phases of (select, move, rebuild,
/// diff). Deterministic for a fixed config. Throws UsageError before doing
/// any work if the config is invalid.
SimulationTrace run_simulation(const SimulationConfig& config, const RunOptions& options = {});

/// Per-run scalars written to metrics tables and aggregated in sweeps.
enum class Scalar : std::size_t {
    mean_degree,
    degree_variance,
    max_degree,
    second_hop_total,       ///< two-hop paths from the moved-node sources
    second_hop_ring_total,  ///< distance-2 ring sizes from the same sources
    source_count,
    new_connection_nodes,   ///< gained nodes in the final phase
    new_edges,
    lost_edges,
    moved_final,
    degree_centrality_mean,
    betweenness_mean,
    betweenness_normalized_mean,
    component_count,
    giant_fraction,
    avg_shortest_path,
    rejections,
    count_
};

inline constexpr std::size_t kScalarCount = static_cast<std::size_t>(Scalar::count_);
std::string_view scalar_name(Scalar s);
std::span<const Scalar> all_scalars();

struct RunSummary {
    SimulationConfig config;
    std::array<std::optional<double>, kScalarCount> values{};
    std::map<std::size_t, std::size_t> degree_histogram;
    Prediction prediction;

    std::optional<double> get(Scalar s) const { return values[static_cast<std::size_t>(s)]; }
    double value(Scalar s) const;  ///< throws if absent
};

RunSummary summarize(const SimulationTrace& trace);

struct Stat {
    double mean = 0.0;
    double std = 0.0;  ///< sample standard deviation, 0 for a single value
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

/// Throws UsageError on an empty input.
Stat describe(std::span<const double> values);

using ScalarStats = std::array<std::optional<Stat>, kScalarCount>;

/// Per-scalar statistics over runs that share a config up to the seed.
/// Scalars absent in every run stay empty. Throws UsageError on empty or
/// heterogeneous input.
ScalarStats aggregate(std::span<const RunSummary> runs);

struct SweepSpec {
    SimulationConfig base;
    std::string parameter;  ///< r, velocity, t_rest, p_stat or n_moves
    std::vector<double> values;
    std::vector<std::uint64_t> replicates;  ///< replicate ids, usually 0..k-1

    void validate() const;
};

/// Base config with the swept parameter set to value (seed untouched).
SimulationConfig apply_parameter(const SimulationConfig& base, std::string_view parameter,
                                 double value);

/// Run seed for one replicate of one sweep value. Depends on the parameter
/// name and value bits rather than the value's position, so reordering or
/// extending the value list leaves existing cells unchanged:
///   mix64(base ^ mix64(fnv1a(parameter) ^ bits(value)) ^ mix64(replicate + 1))
std::uint64_t cell_seed(std::uint64_t base_seed, std::string_view parameter, double value,
                        std::uint64_t replicate);

struct SweepCell {
    double value = 0.0;
    SimulationConfig config;  ///< seed holds the base seed
    std::vector<RunSummary> runs;
    ScalarStats stats{};
    Prediction prediction;
};

struct SweepReport {
    SweepSpec spec;
    std::vector<SweepCell> cells;
};

/// Cells run in parallel and are merged by index, so the report does not
/// depend on the thread count. Any failing run aborts the sweep with its
/// parameter value and seed in the message.
SweepReport run_sweep(const SweepSpec& spec, unsigned threads = 1);

}  // namespace gnmn
