#include "gnmn/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iterator>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "gnmn/error.hpp"
#include "gnmn/parallel.hpp"
#include "gnmn/random.hpp"

namespace gnmn {

void SimulationConfig::validate() const {
    if (n < 1) throw UsageError("n must be >= 1");
    if (dimensions.empty()) throw UsageError("dimensions must list at least one axis");
    for (double d : dimensions) {
        if (!(d > 0.0) || !std::isfinite(d)) throw UsageError("dimensions must be positive");
    }
    if (!(r > 0.0) || !std::isfinite(r)) throw UsageError("r must be > 0");
    mobility().validate(n);
}

MobilityParams SimulationConfig::mobility() const {
    MobilityParams p;
    p.velocity = velocity;
    p.t_rest = t_rest;
    p.t_move = t_move;
    p.p_stat = p_stat;
    p.n_moves = n_moves;
    return p;
}

SimulationTrace run_simulation(const SimulationConfig& config, const RunOptions& options) {
    config.validate();
    const Region region = config.region();
    const MobilityParams params = config.mobility();
    Rng rng(config.seed);

    SimulationTrace trace;
    trace.config = config;

    PointSet positions = sample_positions(config.n, region, rng);
    MobilityState state = init_mobility_state(config.n, params, rng);
    GraphSnapshot current = build_graph(positions, config.r, region, 0);
    trace.initial = current;
    if (options.keep_snapshots) trace.snapshots.push_back(current);

    MetricsOptions metric_options;
    metric_options.threads = options.threads;
    metric_options.path_sample_pairs = options.path_sample_pairs;
    metric_options.path_seed = mix64(config.seed ^ 0x5041544853ULL);

    std::vector<bool> moved_once(config.n, false);
    std::vector<NodeId> ever_moved;
    trace.phases.reserve(config.t_move);
    for (std::size_t phase = 1; phase <= config.t_move; ++phase) {
        auto step = movement_step(state, positions, params, region, rng);
        GraphSnapshot next = build_graph(step.positions, config.r, region, phase);

        PhaseRecord record;
        record.phase = phase;
        record.delta = diff_graphs(current, next, step.moved);
        record.mobility = step.diagnostics;
        bool grew = false;
        for (NodeId i : step.moved) {
            if (!moved_once[i]) {
                moved_once[i] = true;
                grew = true;
            }
        }
        if (grew) {
            ever_moved.clear();
            for (NodeId i = 0; i < config.n; ++i) {
                if (moved_once[i]) ever_moved.push_back(i);
            }
        }
        record.ever_moved = ever_moved.size();
        if (config.metrics_each_phase) record.metrics = compute_metrics(next, ever_moved, metric_options);
        trace.phases.push_back(std::move(record));

        positions = std::move(step.positions);
        current = std::move(next);
        if (options.keep_snapshots) trace.snapshots.push_back(current);
    }

    trace.ever_moved = ever_moved;
    trace.final_snapshot = current;
    if (config.metrics_each_phase) {
        trace.final_metrics = *trace.phases.back().metrics;
    } else {
        trace.final_metrics = compute_metrics(current, ever_moved, metric_options);
    }
    const double area = region.area();
    trace.prediction = predict(config.n, config.r, area);
    trace.comparison = compare(trace.prediction, observe(trace.final_metrics, config.r, area));
    return trace;
}

namespace {

constexpr std::array<std::string_view, kScalarCount> kScalarNames = {
    "mean_degree",
    "degree_variance",
    "max_degree",
    "second_hop_total",
    "second_hop_ring_total",
    "source_count",
    "new_connection_nodes",
    "new_edges",
    "lost_edges",
    "moved_final",
    "degree_centrality_mean",
    "betweenness_mean",
    "betweenness_normalized_mean",
    "component_count",
    "giant_fraction",
    "avg_shortest_path",
    "rejections",
};

constexpr auto kAllScalars = [] {
    std::array<Scalar, kScalarCount> out{};
    for (std::size_t i = 0; i < kScalarCount; ++i) out[i] = static_cast<Scalar>(i);
    return out;
}();

bool same_up_to_seed(SimulationConfig a, SimulationConfig b) {
    a.seed = b.seed = 0;
    return a == b;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::size_t as_count(std::string_view parameter, double value) {
    if (!(value >= 0.0) || value != std::floor(value) || value > 1e15) {
        std::ostringstream msg;
        msg << parameter << " must be a non-negative integer, got " << value;
        throw UsageError(msg.str());
    }
    return static_cast<std::size_t>(value);
}

}  // namespace

std::string_view scalar_name(Scalar s) { return kScalarNames[static_cast<std::size_t>(s)]; }

std::span<const Scalar> all_scalars() { return kAllScalars; }

double RunSummary::value(Scalar s) const {
    const auto v = get(s);
    if (!v) throw std::out_of_range("scalar " + std::string(scalar_name(s)) + " absent");
    return *v;
}

RunSummary summarize(const SimulationTrace& trace) {
    RunSummary out;
    out.config = trace.config;
    out.prediction = trace.prediction;
    const auto& m = trace.final_metrics;
    const auto& last = trace.phases.back();
    auto set = [&](Scalar s, double v) { out.values[static_cast<std::size_t>(s)] = v; };

    set(Scalar::mean_degree, m.degrees.mean);
    set(Scalar::degree_variance, m.degrees.variance);
    set(Scalar::max_degree, static_cast<double>(m.degrees.max));
    set(Scalar::second_hop_total, static_cast<double>(m.second_hop_paths.total));
    set(Scalar::second_hop_ring_total, static_cast<double>(m.second_hop_ring.total));
    set(Scalar::source_count, static_cast<double>(m.sources.size()));
    set(Scalar::new_connection_nodes, static_cast<double>(last.delta.gained_nodes.size()));
    set(Scalar::new_edges, static_cast<double>(last.delta.new_edges.size()));
    set(Scalar::lost_edges, static_cast<double>(last.delta.lost_edges.size()));
    set(Scalar::moved_final, static_cast<double>(last.delta.moved.size()));
    set(Scalar::degree_centrality_mean, m.degree_centrality_mean);
    set(Scalar::betweenness_mean, m.betweenness_mean);
    set(Scalar::betweenness_normalized_mean, m.betweenness_normalized_mean);
    set(Scalar::component_count, static_cast<double>(m.component_count));
    set(Scalar::giant_fraction, m.giant_fraction);
    if (m.avg_shortest_path) set(Scalar::avg_shortest_path, m.avg_shortest_path->mean);
    std::size_t rejections = 0;
    for (const auto& p : trace.phases) rejections += p.mobility.rejections;
    set(Scalar::rejections, static_cast<double>(rejections));
    out.degree_histogram = m.degrees.histogram;
    return out;
}

Stat describe(std::span<const double> values) {
    if (values.empty()) throw UsageError("describe: no values");
    Stat s;
    s.count = values.size();
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.count);
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    if (s.count > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(s.count - 1));
    }
    return s;
}

ScalarStats aggregate(std::span<const RunSummary> runs) {
    if (runs.empty()) throw UsageError("aggregate: no runs");
    for (const auto& run : runs) {
        if (!same_up_to_seed(run.config, runs.front().config)) {
            throw UsageError("aggregate: runs have different configs");
        }
    }
    ScalarStats out{};
    std::vector<double> column;
    for (Scalar s : all_scalars()) {
        column.clear();
        for (const auto& run : runs) {
            if (const auto v = run.get(s)) column.push_back(*v);
        }
        if (!column.empty()) out[static_cast<std::size_t>(s)] = describe(column);
    }
    return out;
}

void SweepSpec::validate() const {
    base.validate();
    if (values.empty()) throw UsageError("sweep needs at least one value");
    if (replicates.empty()) throw UsageError("sweep needs at least one seed");
    for (double v : values) apply_parameter(base, parameter, v).validate();
}

SimulationConfig apply_parameter(const SimulationConfig& base, std::string_view parameter,
                                 double value) {
    SimulationConfig c = base;
    if (parameter == "r") {
        c.r = value;
    } else if (parameter == "velocity") {
        c.velocity = value;
    } else if (parameter == "t_rest") {
        c.t_rest = as_count(parameter, value);
    } else if (parameter == "p_stat") {
        c.p_stat = value;
    } else if (parameter == "n_moves") {
        c.n_moves = as_count(parameter, value);
    } else {
        throw UsageError("unknown sweep parameter '" + std::string(parameter) +
                         "' (expected r, velocity, t_rest, p_stat or n_moves)");
    }
    c.validate();
    return c;
}

std::uint64_t cell_seed(std::uint64_t base_seed, std::string_view parameter, double value,
                        std::uint64_t replicate) {
    if (value == 0.0) value = 0.0;  // fold -0.0
    const auto bits = std::bit_cast<std::uint64_t>(value);
    return mix64(base_seed ^ mix64(fnv1a(parameter) ^ bits) ^ mix64(replicate + 1));
}

SweepReport run_sweep(const SweepSpec& spec, unsigned threads) {
    spec.validate();
    SweepReport report;
    report.spec = spec;
    const std::size_t reps = spec.replicates.size();
    report.cells.resize(spec.values.size());
    for (std::size_t c = 0; c < spec.values.size(); ++c) {
        auto& cell = report.cells[c];
        cell.value = spec.values[c];
        cell.config = apply_parameter(spec.base, spec.parameter, cell.value);
        cell.runs.resize(reps);
    }

    parallel_for(spec.values.size() * reps, threads, [&](unsigned, std::size_t job) {
        auto& cell = report.cells[job / reps];
        const std::uint64_t replicate = spec.replicates[job % reps];
        SimulationConfig config = cell.config;
        config.seed = cell_seed(spec.base.seed, spec.parameter, cell.value, replicate);
        try {
            cell.runs[job % reps] = summarize(run_simulation(config));
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "sweep run failed (" << spec.parameter << "=" << cell.value
                << ", replicate=" << replicate << ", seed=" << config.seed << "): " << e.what();
            throw std::runtime_error(msg.str());
        }
    });

    for (auto& cell : report.cells) {
        cell.stats = aggregate(cell.runs);
        cell.prediction = cell.runs.front().prediction;
    }
    return report;
}

}  // namespace gnmn
