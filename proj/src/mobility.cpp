#include "gnmn/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gnmn/error.hpp"

namespace gnmn {

void MobilityParams::validate(std::size_t n) const {
    if (!(velocity > 0.0) || !std::isfinite(velocity)) throw UsageError("velocity must be > 0");
    if (t_move < 1) throw UsageError("t_move must be >= 1");
    if (!(p_stat >= 0.0 && p_stat <= 1.0)) throw UsageError("p_stat must be in [0, 1]");
    if (n_moves > n) {
        throw UsageError("n_moves (" + std::to_string(n_moves) + ") exceeds node count (" +
                         std::to_string(n) + ")");
    }
}

std::vector<NodeId> MobilityState::eligible_nodes() const {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < size(); ++i) {
        if (eligible(static_cast<NodeId>(i))) out.push_back(static_cast<NodeId>(i));
    }
    return out;
}

MobilityState init_mobility_state(std::size_t n, const MobilityParams& params, Rng& rng) {
    if (n < 1) throw UsageError("init_mobility_state: need at least one node");
    MobilityState state;
    state.is_static.resize(n);
    state.rest_remaining.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) state.is_static[i] = rng.bernoulli(params.p_stat);
    return state;
}

std::vector<NodeId> select_movers(const MobilityState& state, std::size_t n_moves, Rng& rng) {
    std::vector<NodeId> pool = state.eligible_nodes();
    const std::size_t k = std::min(n_moves, pool.size());
    // Partial Fisher-Yates over the ascending eligible list.
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

Proposal propose_move(std::span<const double> current, const Region& region, double velocity,
                      Rng& rng) {
    if (!(velocity > 0.0)) throw UsageError("propose_move: velocity must be > 0");
    if (current.size() != region.dim()) throw UsageError("propose_move: dimension mismatch");
    const double diagonal = region.diagonal();
    Proposal out;
    while (out.attempts < kMaxProposals) {
        auto candidate = sample_point(region, rng);
        ++out.attempts;
        const double d = distance(current, candidate) / diagonal;
        if (rng.uniform01() < d * velocity) {
            out.position = std::move(candidate);
            out.accepted = true;
            return out;
        }
    }
    out.position.assign(current.begin(), current.end());
    return out;
}

MovementResult movement_step(MobilityState& state, const PointSet& positions,
                             const MobilityParams& params, const Region& region, Rng& rng) {
    if (positions.size() != state.size()) {
        throw UsageError("movement_step: state and positions disagree on node count");
    }
    MovementResult result;
    result.positions = positions;
    auto& diag = result.diagnostics;

    diag.eligible = state.eligible_nodes().size();
    const auto movers = select_movers(state, params.n_moves, rng);
    diag.selected = movers.size();

    for (NodeId i : movers) {
        auto proposal = propose_move(positions[i], region, params.velocity, rng);
        diag.proposals += proposal.attempts;
        if (!proposal.accepted) {
            ++diag.rejections;
            continue;
        }
        const auto old = positions[i];
        if (!std::equal(old.begin(), old.end(), proposal.position.begin())) {
            result.positions.set(i, proposal.position);
            result.moved.push_back(i);
        }
    }
    diag.moved = result.moved.size();

    // Movers start a fresh cooldown; everyone else ticks down.
    std::size_t next = 0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (next < result.moved.size() && result.moved[next] == i) {
            state.rest_remaining[i] = params.t_rest;
            ++next;
        } else if (state.rest_remaining[i] > 0) {
            --state.rest_remaining[i];
        }
    }
    return result;
}

}  // namespace gnmn
