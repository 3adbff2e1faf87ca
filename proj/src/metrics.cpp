#include "gnmn/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "gnmn/error.hpp"
#include "gnmn/parallel.hpp"
#include "gnmn/random.hpp"

namespace gnmn {

namespace {

constexpr std::size_t kBetweennessChunks = 64;
constexpr std::uint32_t kUnreached = UINT32_MAX;

void check_sources(const GraphSnapshot& g, std::span<const NodeId> sources) {
    for (NodeId s : sources) {
        if (s >= g.n()) throw UsageError("source id " + std::to_string(s) + " out of range");
    }
}

// Scratch for one breadth-first / Brandes pass.
struct BfsScratch {
    std::vector<std::uint32_t> dist;
    std::vector<double> sigma;
    std::vector<double> delta;
    std::vector<NodeId> order;

    explicit BfsScratch(std::size_t n) : dist(n, kUnreached), sigma(n, 0.0), delta(n, 0.0) {
        order.reserve(n);
    }
};

void brandes_single_source(const GraphSnapshot& g, NodeId s, BfsScratch& w,
                           std::vector<double>& acc) {
    w.order.clear();
    w.dist[s] = 0;
    w.sigma[s] = 1.0;
    w.order.push_back(s);
    for (std::size_t head = 0; head < w.order.size(); ++head) {
        const NodeId v = w.order[head];
        for (NodeId u : g.neighbors(v)) {
            if (w.dist[u] == kUnreached) {
                w.dist[u] = w.dist[v] + 1;
                w.order.push_back(u);
            }
            if (w.dist[u] == w.dist[v] + 1) w.sigma[u] += w.sigma[v];
        }
    }
    // Dependency accumulation in reverse BFS order; predecessors are the
    // neighbors one level closer to s.
    for (std::size_t k = w.order.size(); k-- > 0;) {
        const NodeId v = w.order[k];
        for (NodeId u : g.neighbors(v)) {
            if (w.dist[u] + 1 == w.dist[v]) {
                w.delta[u] += w.sigma[u] / w.sigma[v] * (1.0 + w.delta[v]);
            }
        }
        if (v != s) acc[v] += w.delta[v];
    }
    for (NodeId v : w.order) {
        w.dist[v] = kUnreached;
        w.sigma[v] = 0.0;
        w.delta[v] = 0.0;
    }
}

// Sum of hop distances from s to every node it reaches.
std::uint64_t bfs_distance_sum(const GraphSnapshot& g, NodeId s, BfsScratch& w,
                               std::uint64_t* reached = nullptr) {
    w.order.clear();
    w.dist[s] = 0;
    w.order.push_back(s);
    std::uint64_t sum = 0;
    for (std::size_t head = 0; head < w.order.size(); ++head) {
        const NodeId v = w.order[head];
        sum += w.dist[v];
        for (NodeId u : g.neighbors(v)) {
            if (w.dist[u] == kUnreached) {
                w.dist[u] = w.dist[v] + 1;
                w.order.push_back(u);
            }
        }
    }
    if (reached) *reached = w.order.size();
    return sum;
}

void reset_distances(BfsScratch& w) {
    for (NodeId v : w.order) w.dist[v] = kUnreached;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

DegreeDistribution degree_distribution(const GraphSnapshot& g) {
    DegreeDistribution out;
    const std::size_t n = g.n();
    if (n == 0) return out;
    std::uint64_t sum = 0;
    for (NodeId i = 0; i < n; ++i) {
        const std::size_t d = g.degree(i);
        ++out.histogram[d];
        sum += d;
        out.max = std::max(out.max, d);
    }
    out.mean = static_cast<double>(sum) / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& [d, count] : out.histogram) {
        const double dev = static_cast<double>(d) - out.mean;
        ss += dev * dev * static_cast<double>(count);
    }
    out.variance = ss / static_cast<double>(n);
    return out;
}

SecondHopCounts second_hop_counts(const GraphSnapshot& g, std::span<const NodeId> sources) {
    check_sources(g, sources);
    SecondHopCounts out;
    out.per_source.reserve(sources.size());
    // stamp[v] == tag marks v as seen for the current source.
    std::vector<std::size_t> stamp(g.n(), 0);
    std::size_t tag = 0;
    for (NodeId s : sources) {
        ++tag;
        stamp[s] = tag;
        for (NodeId u : g.neighbors(s)) stamp[u] = tag;
        std::size_t count = 0;
        for (NodeId u : g.neighbors(s)) {
            for (NodeId w : g.neighbors(u)) {
                if (stamp[w] != tag) {
                    stamp[w] = tag;
                    ++count;
                }
            }
        }
        out.per_source.push_back(count);
        out.total += count;
    }
    return out;
}

SecondHopCounts second_hop_path_counts(const GraphSnapshot& g, std::span<const NodeId> sources) {
    check_sources(g, sources);
    SecondHopCounts out;
    out.per_source.reserve(sources.size());
    for (NodeId s : sources) {
        std::size_t count = 0;
        for (NodeId u : g.neighbors(s)) count += g.degree(u) - 1;
        out.per_source.push_back(count);
        out.total += count;
    }
    return out;
}

std::vector<double> degree_centrality(const GraphSnapshot& g) {
    std::vector<double> out(g.n());
    for (NodeId i = 0; i < g.n(); ++i) out[i] = static_cast<double>(g.degree(i));
    return out;
}

std::vector<double> betweenness_centrality(const GraphSnapshot& g, unsigned threads) {
    const std::size_t n = g.n();
    std::vector<double> result(n, 0.0);
    if (n < 3) return result;

    const std::size_t chunks = std::min(kBetweennessChunks, n);
    std::vector<std::vector<double>> partial(chunks);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), chunks));
    std::vector<BfsScratch> scratch;
    scratch.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) scratch.emplace_back(n);

    parallel_for(chunks, workers, [&](unsigned worker, std::size_t c) {
        auto& acc = partial[c];
        acc.assign(n, 0.0);
        const std::size_t begin = c * n / chunks;
        const std::size_t end = (c + 1) * n / chunks;
        for (std::size_t s = begin; s < end; ++s) {
            brandes_single_source(g, static_cast<NodeId>(s), scratch[worker], acc);
        }
    });
    for (const auto& acc : partial) {
        for (std::size_t v = 0; v < n; ++v) result[v] += acc[v];
    }
    // Each unordered pair was accumulated from both endpoints.
    for (double& b : result) b *= 0.5;
    return result;
}

Components connected_components(const GraphSnapshot& g) {
    const std::size_t n = g.n();
    std::vector<std::uint32_t> discovery(n, kUnreached);
    std::vector<std::size_t> raw_sizes;
    std::vector<NodeId> stack;
    for (NodeId root = 0; root < n; ++root) {
        if (discovery[root] != kUnreached) continue;
        const auto id = static_cast<std::uint32_t>(raw_sizes.size());
        std::size_t size = 0;
        discovery[root] = id;
        stack.push_back(root);
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            ++size;
            for (NodeId u : g.neighbors(v)) {
                if (discovery[u] == kUnreached) {
                    discovery[u] = id;
                    stack.push_back(u);
                }
            }
        }
        raw_sizes.push_back(size);
    }
    // Discovery order is by smallest member id, so a stable sort on size
    // gives the documented tie break.
    std::vector<std::uint32_t> by_size(raw_sizes.size());
    std::iota(by_size.begin(), by_size.end(), 0u);
    std::stable_sort(by_size.begin(), by_size.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return raw_sizes[a] > raw_sizes[b]; });
    std::vector<std::uint32_t> rank(raw_sizes.size());
    Components out;
    out.sizes.reserve(raw_sizes.size());
    for (std::uint32_t k = 0; k < by_size.size(); ++k) {
        rank[by_size[k]] = k;
        out.sizes.push_back(raw_sizes[by_size[k]]);
    }
    out.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.labels[i] = rank[discovery[i]];
    return out;
}

std::optional<PathLength> average_shortest_path(const GraphSnapshot& g,
                                                const PathLengthOptions& options) {
    const auto comps = connected_components(g);
    if (comps.sizes.empty() || comps.sizes.front() < 2) return std::nullopt;
    std::vector<NodeId> giant;
    giant.reserve(comps.sizes.front());
    for (NodeId i = 0; i < g.n(); ++i) {
        if (comps.labels[i] == 0) giant.push_back(i);
    }
    const std::size_t m = giant.size();

    PathLength out;
    if (!options.sample_pairs) {
        const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(options.threads), m));
        std::vector<BfsScratch> scratch;
        for (unsigned w = 0; w < workers; ++w) scratch.emplace_back(g.n());
        std::vector<std::uint64_t> sums(m, 0);
        parallel_for(m, workers, [&](unsigned worker, std::size_t k) {
            sums[k] = bfs_distance_sum(g, giant[k], scratch[worker]);
            reset_distances(scratch[worker]);
        });
        const std::uint64_t total = std::accumulate(sums.begin(), sums.end(), std::uint64_t{0});
        out.pairs = static_cast<std::uint64_t>(m) * (m - 1);
        out.mean = static_cast<double>(total) / static_cast<double>(out.pairs);
        return out;
    }

    // Uniform ordered pairs of distinct giant-component nodes, grouped by
    // source so each distinct source costs one traversal.
    const std::size_t k = *options.sample_pairs;
    if (k == 0) throw UsageError("average_shortest_path: sample_pairs must be positive");
    Rng rng(options.seed);
    std::vector<std::pair<NodeId, NodeId>> pairs(k);
    for (auto& [s, t] : pairs) {
        const auto a = rng.uniform_below(m);
        auto b = rng.uniform_below(m - 1);
        if (b >= a) ++b;
        s = giant[a];
        t = giant[b];
    }
    std::sort(pairs.begin(), pairs.end());
    BfsScratch scratch(g.n());
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < pairs.size();) {
        const NodeId s = pairs[i].first;
        bfs_distance_sum(g, s, scratch);
        for (; i < pairs.size() && pairs[i].first == s; ++i) total += scratch.dist[pairs[i].second];
        reset_distances(scratch);
    }
    out.pairs = k;
    out.mean = static_cast<double>(total) / static_cast<double>(k);
    out.sampled = true;
    return out;
}

MetricsReport compute_metrics(const GraphSnapshot& g, std::span<const NodeId> sources,
                              const MetricsOptions& options) {
    MetricsReport report;
    report.n = g.n();
    report.edge_count = g.edge_count();
    report.degrees = degree_distribution(g);

    report.sources.assign(sources.begin(), sources.end());
    report.second_hop_ring = second_hop_counts(g, sources);
    report.second_hop_paths = second_hop_path_counts(g, sources);

    report.degree_centrality = degree_centrality(g);
    report.degree_centrality_mean = mean_of(report.degree_centrality);
    report.betweenness = betweenness_centrality(g, options.threads);
    report.betweenness_mean = mean_of(report.betweenness);
    if (report.n >= 3) {
        const double pairs = static_cast<double>(report.n - 1) * static_cast<double>(report.n - 2) / 2.0;
        report.betweenness_normalized_mean = report.betweenness_mean / pairs;
    }

    auto comps = connected_components(g);
    report.component_count = comps.sizes.size();
    report.giant_fraction = report.n == 0 ? 0.0
                                          : static_cast<double>(comps.sizes.front()) /
                                                static_cast<double>(report.n);
    report.component_labels = std::move(comps.labels);
    report.component_sizes = std::move(comps.sizes);

    PathLengthOptions path_options;
    path_options.sample_pairs = options.path_sample_pairs;
    path_options.seed = options.path_seed;
    path_options.threads = options.threads;
    report.avg_shortest_path = average_shortest_path(g, path_options);
    return report;
}

}  // namespace gnmn
