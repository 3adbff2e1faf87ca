// Acceptance suite. Prints one PASS/FAIL line per criterion.
//
//   gnmn_acceptance            run every criterion
//   gnmn_acceptance 3 5        run a subset

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gnmn/analytics.hpp"
#include "gnmn/harness.hpp"
#include "gnmn/io.hpp"
#include "gnmn/metrics.hpp"
#include "oracles.hpp"

using namespace gnmn;
using Clock = std::chrono::steady_clock;

namespace {

const std::vector<double> kRadii{0.05, 0.15, 0.25, 0.55, 0.65, 0.85};
const std::vector<double> kVelocities{0.3, 0.5, 0.7, 0.9, 1.1};
const std::vector<double> kRests{5, 10, 15, 20, 25};
constexpr std::size_t kSeeds = 5;
constexpr unsigned kThreads = 4;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[violated] ";
        }
        detail << what << "; ";
    }
};

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

SweepSpec sweep_spec(const std::string& parameter, const std::vector<double>& values) {
    SweepSpec spec;
    spec.base = SimulationConfig{};
    spec.parameter = parameter;
    spec.values = values;
    for (std::uint64_t k = 0; k < kSeeds; ++k) spec.replicates.push_back(k);
    return spec;
}

struct TimedSweep {
    SweepReport report;
    double seconds = 0.0;
};

const TimedSweep& cached_sweep(const std::string& parameter, const std::vector<double>& values) {
    static std::map<std::string, TimedSweep> cache;
    auto it = cache.find(parameter);
    if (it == cache.end()) {
        const auto start = Clock::now();
        TimedSweep t;
        t.report = run_sweep(sweep_spec(parameter, values), kThreads);
        t.seconds = seconds_since(start);
        it = cache.emplace(parameter, std::move(t)).first;
    }
    return it->second;
}

const TimedSweep& r_sweep() { return cached_sweep("r", kRadii); }

double cell_mean(const SweepCell& cell, Scalar s) {
    return cell.stats[static_cast<std::size_t>(s)].value().mean;
}

bool strictly_increasing(const std::vector<double>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
}

bool strictly_decreasing(const std::vector<double>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::less_equal<>()) == v.end();
}

std::string list(const std::vector<double>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i], 6);
    return s + ")";
}

double bounded_degree(double r) { return oracle::expected_degree_bounded(2000, 12.0, 12.0, r); }

// 1. Oracle equivalence.
void oracle_equivalence(Outcome& out) {
    const auto start = Clock::now();
    Rng rng(1);
    const Region region({12.0, 12.0});
    std::size_t graph_mismatch = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.uniform_below(500);
        const double r = 0.05 + 1.5 * rng.uniform01();
        const auto pts = sample_positions(n, region, rng);
        if (build_graph(pts, r, region).edges() != oracle::brute_force_edges(pts, r)) ++graph_mismatch;
    }
    out.require(graph_mismatch == 0, "radius graph mismatches " + std::to_string(graph_mismatch) + "/100");

    double worst = 0.0;
    std::size_t graphs = 0;
    auto check_betweenness = [&](std::size_t n, const std::vector<Edge>& edges) {
        const auto want = oracle::betweenness_by_enumeration(oracle::adjacency(n, edges));
        const auto got = betweenness_centrality(oracle::make_graph(n, edges));
        for (std::size_t v = 0; v < n; ++v) worst = std::max(worst, std::abs(got[v] - want[v]));
        ++graphs;
    };
    for (std::size_t n = 1; n <= 5; ++n) {
        std::vector<std::pair<NodeId, NodeId>> slots;
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = i + 1; j < n; ++j) slots.emplace_back(i, j);
        for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
            std::vector<Edge> edges;
            for (std::size_t b = 0; b < slots.size(); ++b)
                if (mask & (1u << b)) edges.emplace_back(slots[b].first, slots[b].second);
            const auto d = oracle::bfs(oracle::adjacency(n, edges), 0);
            if (std::find(d.begin(), d.end(), oracle::kUnreachable) != d.end()) continue;
            check_betweenness(n, edges);
        }
    }
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.uniform_below(8);
        check_betweenness(n, oracle::random_edges(n, 0.15 + 0.7 * rng.uniform01(), rng));
    }
    out.require(graphs == 772 + 100 && worst <= 1e-9,
                "betweenness max |diff| " + fmt(worst) + " over " + std::to_string(graphs) + " graphs");

    std::size_t ring_mismatch = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 50 + rng.uniform_below(950);
        const auto g = build_graph(sample_positions(n, region, rng), 0.2 + 1.0 * rng.uniform01(), region);
        const auto adj = oracle::adjacency(g);
        std::vector<NodeId> src;
        for (NodeId i = 0; i < n; ++i)
            if (rng.bernoulli(0.2)) src.push_back(i);
        const auto ring = second_hop_counts(g, src);
        for (std::size_t k = 0; k < src.size(); ++k) {
            const auto d = oracle::bfs(adj, src[k]);
            if (ring.per_source[k] != static_cast<std::size_t>(std::count(d.begin(), d.end(), 2))) {
                ++ring_mismatch;
                break;
            }
        }
    }
    out.require(ring_mismatch == 0, "second-hop ring mismatches " + std::to_string(ring_mismatch) + "/100");
    const double t = seconds_since(start);
    out.require(t < 60.0, "runtime " + fmt(t, 3) + " s < 60 s");
}

// 2. Mean degree against the bounded and unbounded predictions.
void degree_consistency(Outcome& out) {
    const auto start = Clock::now();
    const Region region({12.0, 12.0});
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        sum += degree_distribution(build_graph(sample_positions(2000, region, rng), 0.55, region)).mean;
    }
    const double mean = sum / 10.0;
    const double corrected = bounded_degree(0.55);
    const double mc = 1999.0 * oracle::pair_probability_mc(12.0, 12.0, 0.55, 4'000'000, 17);
    const double raw = predict(2000, 0.55, 144.0).expected_neighbors;
    out.detail << "mean degree " << fmt(mean, 6) << ", bounded " << fmt(corrected, 6) << " (MC " << fmt(mc, 6)
               << "), unbounded " << fmt(raw, 6) << "; ";
    out.require(std::abs(mean - corrected) <= 0.10 * corrected, "within 10% of bounded");
    out.require(std::abs(mean - mc) <= 0.10 * mc, "within 10% of MC");
    out.require(std::abs(mean - raw) <= 0.15 * raw, "within 15% of unbounded");
    const double t = seconds_since(start);
    out.require(t < 60.0, "runtime " + fmt(t, 3) + " s < 60 s");
}

// 3. Second-hop trend over radius.
void second_hop_trend(Outcome& out) {
    const auto& s = r_sweep();
    std::vector<double> means;
    for (const auto& cell : s.report.cells) means.push_back(cell_mean(cell, Scalar::second_hop_total));
    out.require(strictly_increasing(means), "second-hop means " + list(means) + " strictly increasing");
    const double ratio = means[5] / means[3];
    out.require(ratio >= 3.0 && ratio <= 6.0, "ratio total(0.85)/total(0.55) = " + fmt(ratio) + " in [3, 6]");
    out.require(s.seconds < 600.0, "sweep runtime " + fmt(s.seconds, 3) + " s < 600 s");
}

double coefficient_of_variation(const std::vector<double>& v) {
    return describe(v).std / describe(v).mean;
}

// 4. Velocity and rest-time stability.
void sweep_stability(Outcome& out) {
    const auto& v = cached_sweep("velocity", kVelocities);
    const auto& t = cached_sweep("t_rest", kRests);
    for (const auto* s : {&v, &t}) {
        std::vector<double> means;
        for (const auto& cell : s->report.cells) means.push_back(cell_mean(cell, Scalar::second_hop_total));
        const double cv = coefficient_of_variation(means);
        out.require(cv < 0.15, s->report.spec.parameter + " means " + list(means) + ", CV " + fmt(cv) + " < 0.15");
    }
    const double total = v.seconds + t.seconds;
    out.require(total < 1200.0, "runtime " + fmt(total, 3) + " s < 1200 s");
}

// 5. Connectivity phases.
void connectivity_phases(Outcome& out) {
    const auto start = Clock::now();
    const auto& s = r_sweep();
    const auto& sparse = s.report.cells.front();
    const auto& dense = s.report.cells.back();
    bool sparse_ok = true;
    bool dense_ok = true;
    for (const auto& run : sparse.runs) {
        sparse_ok = sparse_ok && run.value(Scalar::giant_fraction) < 0.02 &&
                    run.value(Scalar::component_count) >= 1700;
    }
    for (const auto& run : dense.runs) dense_ok = dense_ok && run.value(Scalar::giant_fraction) > 0.95;
    out.require(sparse_ok, "r=0.05 giant " + fmt(cell_mean(sparse, Scalar::giant_fraction)) + " < 0.02, components " +
                               fmt(cell_mean(sparse, Scalar::component_count), 6) + " >= 1700 (every seed)");
    out.require(dense_ok, "r=0.85 giant " + fmt(cell_mean(dense, Scalar::giant_fraction)) + " > 0.95 (every seed)");
    std::vector<double> counts;
    for (const auto& cell : s.report.cells) counts.push_back(cell_mean(cell, Scalar::component_count));
    out.require(strictly_decreasing(counts), "component means " + list(counts) + " strictly decreasing");
    const double t = std::max(s.seconds, seconds_since(start));
    out.require(t < 300.0, "runtime " + fmt(t, 3) + " s < 300 s");
}

// 6. Degree distribution shape, pooled over seeds.
void degree_shape(Outcome& out) {
    const auto& s = r_sweep();
    auto pooled = [&](double r) {
        const auto& cell = *std::find_if(s.report.cells.begin(), s.report.cells.end(),
                                         [&](const SweepCell& c) { return c.value == r; });
        double n = 0.0, sum = 0.0, sq = 0.0, max = 0.0;
        for (const auto& run : cell.runs) {
            for (const auto& [degree, count] : run.degree_histogram) {
                n += count;
                sum += static_cast<double>(degree) * count;
                sq += static_cast<double>(degree) * degree * count;
                if (count > 0) max = std::max(max, static_cast<double>(degree));
            }
        }
        const double mean = sum / n;
        return std::tuple{mean, sq / n - mean * mean, max};
    };
    const auto [m55, v55, x55] = pooled(0.55);
    const auto [m85, v85, x85] = pooled(0.85);
    const double ratio = v55 / m55;
    out.require(ratio >= 0.7 && ratio <= 1.3, "r=0.55 variance/mean " + fmt(ratio) + " in [0.7, 1.3]");
    out.require(x85 > 1.5 * m85, "r=0.85 max degree " + fmt(x85) + " > 1.5 x mean " + fmt(m85));
    (void)x55;
    (void)v85;
}

// 7. Centrality trends.
void centrality_trends(Outcome& out) {
    const auto& s = r_sweep();
    double ss_res = 0.0, ss_tot = 0.0;
    std::vector<double> observed;
    for (const auto& cell : s.report.cells) observed.push_back(cell_mean(cell, Scalar::degree_centrality_mean));
    const double mean = std::accumulate(observed.begin(), observed.end(), 0.0) / observed.size();
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double want = bounded_degree(kRadii[i]);
        ss_res += (observed[i] - want) * (observed[i] - want);
        ss_tot += (observed[i] - mean) * (observed[i] - mean);
    }
    const double r2 = 1.0 - ss_res / ss_tot;
    out.require(r2 > 0.98, "degree centrality " + list(observed) + ", R^2 " + fmt(r2, 6) + " > 0.98");
    for (const auto& [name, values] : {std::pair{std::string("velocity"), kVelocities},
                                       std::pair{std::string("t_rest"), kRests}}) {
        const auto& sweep = cached_sweep(name, values);
        out.detail << "betweenness by " << name << ":";
        for (const auto& cell : sweep.report.cells) {
            const auto& st = cell.stats[static_cast<std::size_t>(Scalar::betweenness_mean)].value();
            out.detail << " " << fmt(cell.value) << "=" << fmt(st.mean, 6) << "+-" << fmt(st.std, 3);
        }
        out.detail << "; ";
    }
}

// 8. Determinism.
void determinism(Outcome& out) {
    const auto spec = sweep_spec("r", kRadii);
    const auto first = metrics_csv(metrics_rows(r_sweep().report));
    const auto again = run_sweep(spec, kThreads);
    out.require(first == metrics_csv(metrics_rows(again)), "repeated sweep metrics.csv byte-identical");
    const auto serial = run_sweep(spec, 1);
    double worst = 0.0;
    std::size_t compared = 0;
    for (std::size_t c = 0; c < serial.cells.size(); ++c) {
        for (std::size_t k = 0; k < serial.cells[c].runs.size(); ++k) {
            for (Scalar x : all_scalars()) {
                const auto a = serial.cells[c].runs[k].get(x);
                const auto b = again.cells[c].runs[k].get(x);
                if (a.has_value() != b.has_value()) {
                    worst = INFINITY;
                } else if (a) {
                    worst = std::max(worst, std::abs(*a - *b));
                    ++compared;
                }
            }
        }
    }
    out.require(worst <= 1e-9, "threads 1 vs " + std::to_string(kThreads) + " max |diff| " + fmt(worst) +
                                   " over " + std::to_string(compared) + " scalars");
}

// 9. Performance of the reference radius sweep.
void performance(Outcome& out) {
    const auto& s = r_sweep();
    out.detail << "hardware threads " << std::thread::hardware_concurrency() << ", workers " << kThreads << "; ";
    out.require(s.seconds < 600.0, "r-sweep 30 runs in " + fmt(s.seconds, 4) + " s < 600 s");
}

struct Criterion {
    int id;
    const char* name;
    void (*run)(Outcome&);
};

const Criterion kCriteria[] = {
    {1, "oracle equivalence", oracle_equivalence},
    {2, "mean degree consistency", degree_consistency},
    {3, "second-hop trend over radius", second_hop_trend},
    {4, "velocity and rest-time stability", sweep_stability},
    {5, "connectivity phases", connectivity_phases},
    {6, "degree distribution shape", degree_shape},
    {7, "centrality trends", centrality_trends},
    {8, "determinism", determinism},
    {9, "performance", performance},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    int failures = 0;
    for (const auto& c : kCriteria) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
        const auto start = Clock::now();
        Outcome out;
        try {
            c.run(out);
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail << "exception: " << e.what();
        }
        std::printf("criterion %d %s: %s (%.1f s) %s\n", c.id, c.name, out.pass ? "PASS" : "FAIL",
                    seconds_since(start), out.detail.str().c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
