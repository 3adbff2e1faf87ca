#pragma once

#include <cstddef>
#include <optional>

#include "gnmn/metrics.hpp"

namespace gnmn {

/// Closed-form predictors for a uniform radius graph of n nodes in a region
/// of the given area, ignoring boundary effects.

struct NeighborProbability {
    double value = 0.0;
    bool clamped = false;  ///< pi r^2 exceeded the area; value forced to 1
};

/// pi r^2 / A, clamped to 1.
NeighborProbability p_nei(double r, double area);

/// 1 - (1 - p)^k1 with k1 = n p.
double p_second_nei(std::size_t n, double r, double area);

/// p * n (n - 1) / 2.
double expected_betweenness(std::size_t n, double r, double area);

/// sqrt(A) / r.
double predicted_avg_path(double area, double r);

struct Prediction {
    std::size_t n = 0;
    double r = 0.0;
    double area = 0.0;
    double density = 0.0;  ///< n / A

    double p_nei = 0.0;
    bool out_of_validity = false;
    double expected_neighbors = 0.0;  ///< k1 = n p_nei
    double p_second_nei = 0.0;
    double expected_degree_centrality = 0.0;
    double predicted_avg_path = 0.0;
    double expected_betweenness = 0.0;
};

Prediction predict(std::size_t n, double r, double area);

/// Relative errors (empirical - predicted) / predicted. Absent when the
/// empirical quantity is missing or the prediction is zero.
struct Comparison {
    std::size_t n = 0;
    double r = 0.0;
    double area = 0.0;

    std::optional<double> mean_degree;
    std::optional<double> second_hop_fraction;
    std::optional<double> betweenness;
    std::optional<double> avg_path;
};

/// Observed quantities the comparison needs. The second-hop fraction is the
/// mean distance-2 ring size per source divided by n - 1.
struct Observed {
    std::size_t n = 0;
    double r = 0.0;
    double area = 0.0;
    double mean_degree = 0.0;
    std::optional<double> second_hop_fraction;
    double betweenness_mean = 0.0;
    std::optional<double> avg_path;
};

Observed observe(const MetricsReport& report, double r, double area);

/// Throws UsageError when (n, r, A) disagree.
Comparison compare(const Prediction& prediction, const Observed& observed);

}  // namespace gnmn
