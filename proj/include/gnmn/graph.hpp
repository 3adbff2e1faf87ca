#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "gnmn/geometry.hpp"

namespace gnmn {

/// Undirected edge with first < second.
struct Edge {
    NodeId first = 0;
    NodeId second = 0;

    Edge() = default;
    Edge(NodeId a, NodeId b) : first(a < b ? a : b), second(a < b ? b : a) {}

    auto operator<=>(const Edge&) const = default;
};

/// Radius graph over a point set at one phase. Neighbor lists are sorted
/// and duplicate-free; adjacency is symmetric and loop-free.
class GraphSnapshot {
public:
    GraphSnapshot() = default;

    /// Adopts an explicit edge list (used when reading stored graphs).
    /// Duplicates are collapsed; self-loops throw UsageError.
    GraphSnapshot(Region region, PointSet positions, double r, std::size_t phase,
                  std::span<const Edge> edges);

    std::size_t n() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    double radius() const noexcept { return r_; }
    std::size_t phase() const noexcept { return phase_; }
    void set_phase(std::size_t phase) noexcept { phase_ = phase; }
    const Region& region() const noexcept { return region_; }
    const PointSet& positions() const noexcept { return positions_; }

    std::span<const NodeId> neighbors(NodeId i) const {
        return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }
    std::size_t degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }
    std::size_t edge_count() const noexcept { return targets_.size() / 2; }
    bool has_edge(NodeId a, NodeId b) const;

    /// All edges, sorted.
    std::vector<Edge> edges() const;

private:
    Region region_{{1.0}};
    PointSet positions_;
    double r_ = 0.0;
    std::size_t phase_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
};

/// j in adj[i] iff distance(p_i, p_j) < r. Throws UsageError if r <= 0
/// or a position lies outside the region.
GraphSnapshot build_graph(const PointSet& positions, double r, const Region& region,
                          std::size_t phase = 0);

/// Changes between two consecutive snapshots.
struct StepDelta {
    std::vector<NodeId> moved;
    std::vector<Edge> new_edges;
    std::vector<Edge> lost_edges;
    std::vector<NodeId> gained_nodes;    ///< endpoints of new_edges
    std::vector<NodeId> isolated_nodes;  ///< degree 0 in the new snapshot
};

StepDelta diff_graphs(const GraphSnapshot& before, const GraphSnapshot& after,
                      std::span<const NodeId> moved);

/// Ids whose coordinates differ between two point sets of equal size.
std::vector<NodeId> changed_positions(const PointSet& before, const PointSet& after);

}  // namespace gnmn
