#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gnmn/graph.hpp"

namespace gnmn {

struct DegreeDistribution {
    std::map<std::size_t, std::size_t> histogram;  ///< degree -> node count
    double mean = 0.0;                             ///< 2|E| / N
    double variance = 0.0;                         ///< population variance over nodes
    std::size_t max = 0;
};

DegreeDistribution degree_distribution(const GraphSnapshot& g);

struct SecondHopCounts {
    std::vector<std::size_t> per_source;
    std::size_t total = 0;
};

/// For each source, the number of nodes at hop distance exactly 2.
SecondHopCounts second_hop_counts(const GraphSnapshot& g, std::span<const NodeId> sources);

/// For each source s, the number of non-backtracking two-hop paths
/// s-u-w (w != s), i.e. sum over neighbors u of (deg(u) - 1). Nodes reached
/// through several first neighbors are counted once per route.
SecondHopCounts second_hop_path_counts(const GraphSnapshot& g, std::span<const NodeId> sources);

/// CD(i) = deg(i).
std::vector<double> degree_centrality(const GraphSnapshot& g);

/// Exact unweighted betweenness, undirected pairs counted once.
///
/// Sources are split into a fixed number of contiguous chunks whose
/// partial sums are reduced in chunk order, so the result is bitwise
/// independent of the thread count.
std::vector<double> betweenness_centrality(const GraphSnapshot& g, unsigned threads = 1);

struct Components {
    /// Component rank per node: 0 is the largest component, ties broken by
    /// smallest member id.
    std::vector<std::uint32_t> labels;
    std::vector<std::size_t> sizes;  ///< descending
};

Components connected_components(const GraphSnapshot& g);

struct PathLengthOptions {
    std::optional<std::size_t> sample_pairs;  ///< exact when empty
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct PathLength {
    double mean = 0.0;
    std::uint64_t pairs = 0;  ///< ordered pairs averaged over
    bool sampled = false;
};

/// Mean hop distance over ordered pairs inside the largest component.
/// Empty when that component has fewer than two nodes.
std::optional<PathLength> average_shortest_path(const GraphSnapshot& g,
                                                const PathLengthOptions& options = {});

struct MetricsOptions {
    unsigned threads = 1;
    std::optional<std::size_t> path_sample_pairs;
    std::uint64_t path_seed = 0;
};

struct MetricsReport {
    std::size_t n = 0;
    std::size_t edge_count = 0;
    DegreeDistribution degrees;

    std::vector<NodeId> sources;
    SecondHopCounts second_hop_ring;
    SecondHopCounts second_hop_paths;

    std::vector<double> degree_centrality;
    double degree_centrality_mean = 0.0;
    std::vector<double> betweenness;
    double betweenness_mean = 0.0;
    double betweenness_normalized_mean = 0.0;  ///< divided by (N-1)(N-2)/2

    std::vector<std::uint32_t> component_labels;
    std::vector<std::size_t> component_sizes;
    std::size_t component_count = 0;
    double giant_fraction = 0.0;

    std::optional<PathLength> avg_shortest_path;
};

MetricsReport compute_metrics(const GraphSnapshot& g, std::span<const NodeId> sources,
                              const MetricsOptions& options = {});

}  // namespace gnmn
