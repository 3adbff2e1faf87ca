#include "gnmn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gnmn/error.hpp"

namespace gnmn {

Region::Region(std::vector<double> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw UsageError("region needs at least one axis");
    for (double d : dims_) {
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw UsageError("region dimensions must be positive and finite");
        }
    }
}

double Region::area() const noexcept {
    return std::accumulate(dims_.begin(), dims_.end(), 1.0, std::multiplies<>());
}

double Region::diagonal() const noexcept {
    double s = 0.0;
    for (double d : dims_) s += d * d;
    return std::sqrt(s);
}

bool Region::contains(std::span<const double> point) const noexcept {
    if (point.size() != dims_.size()) return false;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (!(point[k] >= 0.0 && point[k] < dims_[k])) return false;
    }
    return true;
}

void PointSet::set(std::size_t i, std::span<const double> p) {
    if (p.size() != dim_) throw UsageError("point dimension mismatch");
    std::copy(p.begin(), p.end(), coords_.begin() + static_cast<std::ptrdiff_t>(i * dim_));
}

void PointSet::push_back(std::span<const double> p) {
    if (coords_.empty() && dim_ == 0) dim_ = p.size();
    if (p.size() != dim_) throw UsageError("point dimension mismatch");
    coords_.insert(coords_.end(), p.begin(), p.end());
}

namespace {

// x * extent can round up to extent itself when x is within one ulp of 1.
double scale_into(double unit, double extent) {
    const double v = unit * extent;
    return v < extent ? v : std::nextafter(extent, 0.0);
}

}  // namespace

std::vector<double> sample_point(const Region& region, Rng& rng) {
    std::vector<double> p(region.dim());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = scale_into(rng.uniform01(), region.extent(k));
    return p;
}

PointSet sample_positions(std::size_t n, const Region& region, Rng& rng) {
    PointSet out(n, region.dim());
    for (std::size_t i = 0; i < n; ++i) {
        auto p = out[i];
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = scale_into(rng.uniform01(), region.extent(k));
    }
    return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw UsageError("distance: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
    }
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

GridIndex::GridIndex(const PointSet& positions, const Region& region, double radius)
    : n_(positions.size()) {
    if (!(radius > 0.0)) throw UsageError("grid radius must be positive");
    if (!positions.empty() && positions.dim() != region.dim()) {
        throw UsageError("grid: point dimension does not match region");
    }
    cell_size_ = std::max(radius, region.diagonal() / 64.0);

    cells_per_axis_.resize(region.dim());
    std::size_t cells = 1;
    for (std::size_t k = 0; k < region.dim(); ++k) {
        const auto c = static_cast<std::size_t>(std::ceil(region.extent(k) / cell_size_));
        cells_per_axis_[k] = std::max<std::size_t>(1, c);
        cells *= cells_per_axis_[k];
    }

    // Counting sort by cell keeps each bucket in ascending id order.
    std::vector<std::size_t> cell_ids(n_);
    cell_start_.assign(cells + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) {
        cell_ids[i] = cell_of(positions[i]);
        ++cell_start_[cell_ids[i] + 1];
    }
    std::partial_sum(cell_start_.begin(), cell_start_.end(), cell_start_.begin());
    ids_.resize(n_);
    std::vector<std::size_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
    for (std::size_t i = 0; i < n_; ++i) ids_[cursor[cell_ids[i]]++] = static_cast<NodeId>(i);
}

std::size_t GridIndex::cell_of(std::span<const double> p) const {
    std::size_t flat = 0;
    for (std::size_t k = p.size(); k-- > 0;) {
        const double scaled = std::floor(p[k] / cell_size_);
        std::size_t c = scaled <= 0.0 ? 0 : static_cast<std::size_t>(scaled);
        c = std::min(c, cells_per_axis_[k] - 1);
        flat = flat * cells_per_axis_[k] + c;
    }
    return flat;
}

template <typename Visit>
void GridIndex::visit_neighborhood(std::span<const double> p, Visit&& visit) const {
    const std::size_t dim = cells_per_axis_.size();
    std::vector<std::size_t> lo(dim), hi(dim), cur(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        const double scaled = std::floor(p[k] / cell_size_);
        std::size_t c = scaled <= 0.0 ? 0 : static_cast<std::size_t>(scaled);
        c = std::min(c, cells_per_axis_[k] - 1);
        lo[k] = c == 0 ? 0 : c - 1;
        hi[k] = std::min(c + 1, cells_per_axis_[k] - 1);
        cur[k] = lo[k];
    }
    // Odometer over the 3^d block of cells around p.
    while (true) {
        std::size_t flat = 0;
        for (std::size_t k = dim; k-- > 0;) flat = flat * cells_per_axis_[k] + cur[k];
        visit(bucket(flat));
        std::size_t k = 0;
        while (k < dim && cur[k] == hi[k]) {
            cur[k] = lo[k];
            ++k;
        }
        if (k == dim) break;
        ++cur[k];
    }
}

std::vector<NodeId> GridIndex::radius_query(const PointSet& positions, NodeId i, double r) const {
    if (i >= n_ || i >= positions.size()) {
        throw UsageError("radius_query: node id " + std::to_string(i) + " out of range");
    }
    if (r > cell_size_) throw UsageError("radius_query: radius exceeds grid cell size");
    const auto p = positions[i];
    std::vector<NodeId> out;
    visit_neighborhood(p, [&](std::span<const NodeId> ids) {
        for (NodeId j : ids) {
            if (j != i && distance(p, positions[j]) < r) out.push_back(j);
        }
    });
    std::sort(out.begin(), out.end());
    return out;
}

void GridIndex::forward_neighbors(const PointSet& positions, NodeId i, double r,
                                  std::vector<NodeId>& out) const {
    if (r > cell_size_) throw UsageError("radius_query: radius exceeds grid cell size");
    const auto p = positions[i];
    visit_neighborhood(p, [&](std::span<const NodeId> ids) {
        for (NodeId j : ids) {
            if (j > i && distance(p, positions[j]) < r) out.push_back(j);
        }
    });
}

}  // namespace gnmn
