#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gnmn/geometry.hpp"
#include "gnmn/random.hpp"

namespace gnmn {

/// Upper bound on rejected proposals for one mover before it stays put.
inline constexpr std::size_t kMaxProposals = 10'000;

struct MobilityParams {
    double velocity = 0.5;    ///< acceptance weight on normalized jump length
    std::size_t t_rest = 10;  ///< cooldown, in phases, after a node moves
    std::size_t t_move = 20;  ///< movement phases per run
    double p_stat = 0.8;      ///< probability a node never moves
    std::size_t n_moves = 100;

    /// Throws UsageError unless the parameter set is usable for n nodes.
    void validate(std::size_t n) const;
};

struct MobilityState {
    std::vector<bool> is_static;
    std::vector<std::size_t> rest_remaining;

    std::size_t size() const noexcept { return is_static.size(); }
    bool eligible(NodeId i) const { return !is_static[i] && rest_remaining[i] == 0; }
    std::vector<NodeId> eligible_nodes() const;
};

/// One draw per node, in id order, for the static flag.
MobilityState init_mobility_state(std::size_t n, const MobilityParams& params, Rng& rng);

/// Uniform sample without replacement of min(n_moves, |eligible|) eligible
/// nodes, returned ascending.
std::vector<NodeId> select_movers(const MobilityState& state, std::size_t n_moves, Rng& rng);

struct Proposal {
    std::vector<double> position;
    std::size_t attempts = 0;  ///< candidates drawn, including the accepted one
    bool accepted = false;     ///< false when the proposal cap was hit
};

/// Draw uniform candidates until one is accepted with probability
/// min(1, velocity * |candidate - current| / region.diagonal()).
Proposal propose_move(std::span<const double> current, const Region& region, double velocity,
                      Rng& rng);

struct MovementDiagnostics {
    std::size_t eligible = 0;
    std::size_t selected = 0;
    std::size_t moved = 0;
    std::size_t proposals = 0;
    std::size_t rejections = 0;  ///< movers that exhausted kMaxProposals
};

struct MovementResult {
    PointSet positions;
    std::vector<NodeId> moved;  ///< ascending; only nodes whose position changed
    MovementDiagnostics diagnostics;
};

/// One movement phase. RNG order: mover selection, then proposals in
/// ascending node id. Movers start a t_rest cooldown; every other positive
/// counter is decremented.
MovementResult movement_step(MobilityState& state, const PointSet& positions,
                             const MobilityParams& params, const Region& region, Rng& rng);

}  // namespace gnmn
