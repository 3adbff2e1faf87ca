#include "gnmn/analytics.hpp"

#include <cmath>
#include <numbers>

#include "gnmn/error.hpp"

namespace gnmn {

namespace {

void check_area(double area) {
    if (!(area > 0.0)) throw UsageError("area must be > 0");
}

void check_radius(double r) {
    if (!(r >= 0.0)) throw UsageError("radius must be >= 0");
}

std::optional<double> relative_error(double observed, double predicted) {
    if (predicted == 0.0) return std::nullopt;
    return (observed - predicted) / predicted;
}

}  // namespace

NeighborProbability p_nei(double r, double area) {
    check_area(area);
    check_radius(r);
    const double p = std::numbers::pi * r * r / area;
    if (p > 1.0) return {1.0, true};
    return {p, false};
}

double p_second_nei(std::size_t n, double r, double area) {
    const double p = p_nei(r, area).value;
    const double k1 = static_cast<double>(n) * p;
    return 1.0 - std::pow(1.0 - p, k1);
}

double expected_betweenness(std::size_t n, double r, double area) {
    const double nn = static_cast<double>(n);
    return p_nei(r, area).value * nn * (nn - 1.0) / 2.0;
}

double predicted_avg_path(double area, double r) {
    check_area(area);
    if (!(r > 0.0)) throw UsageError("predicted_avg_path: radius must be > 0");
    return std::sqrt(area) / r;
}

Prediction predict(std::size_t n, double r, double area) {
    Prediction p;
    p.n = n;
    p.r = r;
    p.area = area;
    const auto nei = p_nei(r, area);
    p.density = static_cast<double>(n) / area;
    p.p_nei = nei.value;
    p.out_of_validity = nei.clamped;
    p.expected_neighbors = static_cast<double>(n) * nei.value;
    p.p_second_nei = p_second_nei(n, r, area);
    p.expected_degree_centrality = p.expected_neighbors;
    p.predicted_avg_path = r > 0.0 ? predicted_avg_path(area, r) : 0.0;
    p.expected_betweenness = expected_betweenness(n, r, area);
    return p;
}

Observed observe(const MetricsReport& report, double r, double area) {
    Observed o;
    o.n = report.n;
    o.r = r;
    o.area = area;
    o.mean_degree = report.degrees.mean;
    if (!report.sources.empty() && report.n > 1) {
        const double per_source = static_cast<double>(report.second_hop_ring.total) /
                                  static_cast<double>(report.sources.size());
        o.second_hop_fraction = per_source / static_cast<double>(report.n - 1);
    }
    o.betweenness_mean = report.betweenness_mean;
    if (report.avg_shortest_path) o.avg_path = report.avg_shortest_path->mean;
    return o;
}

Comparison compare(const Prediction& prediction, const Observed& observed) {
    if (prediction.n != observed.n || prediction.r != observed.r ||
        prediction.area != observed.area) {
        throw UsageError("compare: prediction and observation describe different (N, r, A)");
    }
    Comparison c;
    c.n = prediction.n;
    c.r = prediction.r;
    c.area = prediction.area;
    c.mean_degree = relative_error(observed.mean_degree, prediction.expected_degree_centrality);
    if (observed.second_hop_fraction) {
        c.second_hop_fraction = relative_error(*observed.second_hop_fraction, prediction.p_second_nei);
    }
    c.betweenness = relative_error(observed.betweenness_mean, prediction.expected_betweenness);
    if (observed.avg_path) c.avg_path = relative_error(*observed.avg_path, prediction.predicted_avg_path);
    return c;
}

}  // namespace gnmn
