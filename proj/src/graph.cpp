#include "gnmn/graph.hpp"

#include <algorithm>
#include <iterator>
#include <string>

#include "gnmn/error.hpp"

namespace gnmn {

namespace {

void fill_csr(std::size_t n, std::span<const Edge> edges, std::vector<std::size_t>& offsets,
              std::vector<NodeId>& targets) {
    offsets.assign(n + 1, 0);
    for (const Edge& e : edges) {
        ++offsets[e.first + 1];
        ++offsets[e.second + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    targets.resize(offsets[n]);
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const Edge& e : edges) {
        targets[cursor[e.first]++] = e.second;
        targets[cursor[e.second]++] = e.first;
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::sort(targets.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
                  targets.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]));
    }
}

}  // namespace

GraphSnapshot::GraphSnapshot(Region region, PointSet positions, double r, std::size_t phase,
                             std::span<const Edge> edges)
    : region_(std::move(region)), positions_(std::move(positions)), r_(r), phase_(phase) {
    const std::size_t n = positions_.size();
    std::vector<Edge> sorted(edges.begin(), edges.end());
    for (const Edge& e : sorted) {
        if (e.first == e.second) throw UsageError("graph: self-loop on node " + std::to_string(e.first));
        if (e.second >= n) throw UsageError("graph: edge endpoint out of range");
    }
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    fill_csr(n, sorted, offsets_, targets_);
}

bool GraphSnapshot::has_edge(NodeId a, NodeId b) const {
    const auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<Edge> GraphSnapshot::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId i = 0; i < n(); ++i) {
        for (NodeId j : neighbors(i)) {
            if (i < j) out.emplace_back(i, j);
        }
    }
    return out;
}

GraphSnapshot build_graph(const PointSet& positions, double r, const Region& region,
                          std::size_t phase) {
    if (!(r > 0.0)) throw UsageError("build_graph: radius must be > 0");
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (!region.contains(positions[i])) {
            throw UsageError("build_graph: node " + std::to_string(i) + " lies outside the region");
        }
    }
    std::vector<Edge> edges;
    if (positions.size() > 1) {
        const GridIndex index(positions, region, r);
        std::vector<NodeId> forward;
        for (NodeId i = 0; i < positions.size(); ++i) {
            forward.clear();
            index.forward_neighbors(positions, i, r, forward);
            for (NodeId j : forward) edges.emplace_back(i, j);
        }
    }
    return GraphSnapshot(region, positions, r, phase, edges);
}

StepDelta diff_graphs(const GraphSnapshot& before, const GraphSnapshot& after,
                      std::span<const NodeId> moved) {
    if (before.n() != after.n()) {
        throw UsageError("diff_graphs: snapshots differ in node count (" + std::to_string(before.n()) +
                         " vs " + std::to_string(after.n()) + ")");
    }
    StepDelta delta;
    delta.moved.assign(moved.begin(), moved.end());
    std::sort(delta.moved.begin(), delta.moved.end());

    const auto old_edges = before.edges();
    const auto new_edges = after.edges();
    std::set_difference(new_edges.begin(), new_edges.end(), old_edges.begin(), old_edges.end(),
                        std::back_inserter(delta.new_edges));
    std::set_difference(old_edges.begin(), old_edges.end(), new_edges.begin(), new_edges.end(),
                        std::back_inserter(delta.lost_edges));

    std::vector<bool> gained(after.n(), false);
    for (const Edge& e : delta.new_edges) gained[e.first] = gained[e.second] = true;
    for (NodeId i = 0; i < after.n(); ++i) {
        if (gained[i]) delta.gained_nodes.push_back(i);
        if (after.degree(i) == 0) delta.isolated_nodes.push_back(i);
    }
    return delta;
}

std::vector<NodeId> changed_positions(const PointSet& before, const PointSet& after) {
    if (before.size() != after.size() || before.dim() != after.dim()) {
        throw UsageError("changed_positions: point sets differ in shape");
    }
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < before.size(); ++i) {
        const auto a = before[i];
        const auto b = after[i];
        if (!std::equal(a.begin(), a.end(), b.begin())) out.push_back(static_cast<NodeId>(i));
    }
    return out;
}

}  // namespace gnmn
