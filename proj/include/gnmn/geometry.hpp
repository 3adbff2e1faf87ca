#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gnmn/random.hpp"

namespace gnmn {

using NodeId = std::uint32_t;

/// Axis-aligned box [0, dims[0]) x [0, dims[1]) x ... anchored at the origin.
/// Non-periodic: nothing wraps at the edges.
class Region {
public:
    explicit Region(std::vector<double> dims);

    std::size_t dim() const noexcept { return dims_.size(); }
    std::span<const double> dims() const noexcept { return dims_; }
    double extent(std::size_t axis) const { return dims_.at(axis); }

    double area() const noexcept;
    double diagonal() const noexcept;
    bool contains(std::span<const double> point) const noexcept;

    bool operator==(const Region&) const = default;

private:
    std::vector<double> dims_;
};

/// Flat storage for n points of equal dimension; point i is a span of
/// dim() coordinates.
class PointSet {
public:
    PointSet() = default;
    PointSet(std::size_t n, std::size_t dim) : dim_(dim), coords_(n * dim, 0.0) {}

    std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return coords_.empty(); }

    std::span<const double> operator[](std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    std::span<double> operator[](std::size_t i) { return {coords_.data() + i * dim_, dim_}; }

    void set(std::size_t i, std::span<const double> p);
    void push_back(std::span<const double> p);

    std::span<const double> raw() const noexcept { return coords_; }

    bool operator==(const PointSet&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
};

/// n independent points uniform over the region (half-open on every axis).
/// Consumes n * region.dim() draws from rng, point-major.
PointSet sample_positions(std::size_t n, const Region& region, Rng& rng);

/// Uniform point in the region.
std::vector<double> sample_point(const Region& region, Rng& rng);

/// Euclidean distance. Throws UsageError on dimension mismatch.
double distance(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

/// Uniform bucket grid over a region for fixed-radius neighbor queries.
///
/// Buckets are stored CSR-style: the ids of cell c are
/// ids_[cell_start_[c] .. cell_start_[c + 1]), ascending. Immutable after
/// construction.
class GridIndex {
public:
    /// cell_size = max(radius, diagonal / 64).
    GridIndex(const PointSet& positions, const Region& region, double radius);

    double cell_size() const noexcept { return cell_size_; }
    std::size_t cell_count() const noexcept { return cell_start_.size() - 1; }
    std::span<const std::size_t> cells_per_axis() const noexcept { return cells_per_axis_; }

    /// Ids j != i with distance(p_i, p_j) < r, ascending. Requires
    /// r <= cell_size(); throws UsageError if i is out of range.
    std::vector<NodeId> radius_query(const PointSet& positions, NodeId i, double r) const;

    /// Same as radius_query but appends only ids j > i. Used for edge
    /// enumeration so each undirected pair is visited once.
    void forward_neighbors(const PointSet& positions, NodeId i, double r,
                           std::vector<NodeId>& out) const;

    std::span<const NodeId> bucket(std::size_t cell) const {
        return {ids_.data() + cell_start_[cell], cell_start_[cell + 1] - cell_start_[cell]};
    }

private:
    std::size_t cell_of(std::span<const double> p) const;
    template <typename Visit>
    void visit_neighborhood(std::span<const double> p, Visit&& visit) const;

    double cell_size_ = 0.0;
    std::size_t n_ = 0;
    std::vector<std::size_t> cells_per_axis_;
    std::vector<std::size_t> cell_start_;
    std::vector<NodeId> ids_;
};

}  // namespace gnmn
