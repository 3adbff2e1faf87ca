#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "gnmn/io.hpp"

namespace gnmn {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_json(const std::filesystem::path& path, const Json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

std::vector<MetricsRow> metrics_rows(const SweepReport& report) {
    std::vector<MetricsRow> rows;
    for (const auto& cell : report.cells) {
        for (const auto& run : cell.runs) rows.push_back({report.spec.parameter, cell.value, run});
    }
    return rows;
}

std::vector<MetricsRow> metrics_rows(const RunSummary& run) { return {{"none", std::nullopt, run}}; }

std::string metrics_csv(std::span<const MetricsRow> rows) {
    std::string out(kMetricsCsvHeader);
    out += '\n';
    auto field = [&](std::optional<double> v) {
        out += ',';
        if (v) out += format_double(*v);
    };
    for (const auto& row : rows) {
        const auto& run = row.run;
        out += row.parameter;
        field(row.value);
        out += ',';
        out += std::to_string(run.config.seed);
        field(run.get(Scalar::mean_degree));
        field(run.get(Scalar::second_hop_total));
        field(run.get(Scalar::new_connection_nodes));
        field(run.get(Scalar::degree_centrality_mean));
        field(run.get(Scalar::betweenness_mean));
        field(run.get(Scalar::component_count));
        field(run.get(Scalar::giant_fraction));
        field(run.get(Scalar::avg_shortest_path));
        field(run.prediction.expected_degree_centrality);
        field(run.prediction.p_second_nei);
        field(run.prediction.expected_betweenness);
        field(run.prediction.predicted_avg_path);
        out += '\n';
    }
    return out;
}

void write_metrics_csv(std::span<const MetricsRow> rows, const std::filesystem::path& path) {
    write_text(path, metrics_csv(rows));
}

Json prediction_to_json(const Prediction& p) {
    Json j;
    j["n"] = p.n;
    j["r"] = p.r;
    j["area"] = p.area;
    j["density"] = p.density;
    j["p_nei"] = p.p_nei;
    j["out_of_validity"] = p.out_of_validity;
    j["expected_neighbors"] = p.expected_neighbors;
    j["p_second_nei"] = p.p_second_nei;
    j["expected_degree_centrality"] = p.expected_degree_centrality;
    j["predicted_avg_path"] = p.predicted_avg_path;
    j["expected_betweenness"] = p.expected_betweenness;
    return j;
}

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json stat_to_json(const std::optional<Stat>& s) {
    if (!s) return nullptr;
    Json j;
    j["mean"] = s->mean;
    j["std"] = s->std;
    j["min"] = s->min;
    j["max"] = s->max;
    j["count"] = s->count;
    return j;
}

Json histogram_to_json(const std::map<std::size_t, std::size_t>& h) {
    Json j = Json::object();
    for (const auto& [degree, count] : h) j[std::to_string(degree)] = count;
    return j;
}

}  // namespace

Json comparison_to_json(const Comparison& c) {
    Json j;
    j["mean_degree"] = optional_number(c.mean_degree);
    j["second_hop_fraction"] = optional_number(c.second_hop_fraction);
    j["betweenness"] = optional_number(c.betweenness);
    j["avg_path"] = optional_number(c.avg_path);
    return j;
}

Json metrics_to_json(const MetricsReport& m) {
    Json j;
    j["n"] = m.n;
    j["edge_count"] = m.edge_count;
    j["degree_histogram"] = histogram_to_json(m.degrees.histogram);
    j["mean_degree"] = m.degrees.mean;
    j["degree_variance"] = m.degrees.variance;
    j["max_degree"] = m.degrees.max;
    j["sources"] = m.sources;
    j["second_hop_total"] = m.second_hop_paths.total;
    j["second_hop_paths"] = m.second_hop_paths.per_source;
    j["second_hop_ring_total"] = m.second_hop_ring.total;
    j["second_hop_ring"] = m.second_hop_ring.per_source;
    j["degree_centrality_mean"] = m.degree_centrality_mean;
    j["betweenness_mean"] = m.betweenness_mean;
    j["betweenness_normalized_mean"] = m.betweenness_normalized_mean;
    j["betweenness"] = m.betweenness;
    j["component_count"] = m.component_count;
    j["component_sizes"] = m.component_sizes;
    j["giant_fraction"] = m.giant_fraction;
    if (m.avg_shortest_path) {
        Json p;
        p["mean"] = m.avg_shortest_path->mean;
        p["pairs"] = m.avg_shortest_path->pairs;
        p["sampled"] = m.avg_shortest_path->sampled;
        j["avg_shortest_path"] = std::move(p);
    } else {
        j["avg_shortest_path"] = nullptr;
    }
    return j;
}

Json sweep_to_json(const SweepReport& report) {
    Json j;
    j["config_hash"] = config_hash(report.spec.base);
    j["base"] = config_to_json(report.spec.base);
    j["parameter"] = report.spec.parameter;
    j["values"] = report.spec.values;
    j["seeds"] = report.spec.replicates;
    Json cells = Json::array();
    for (const auto& cell : report.cells) {
        Json c;
        c["value"] = cell.value;
        c["config_hash"] = config_hash(cell.config);
        c["seed_count"] = cell.runs.size();
        c["prediction"] = prediction_to_json(cell.prediction);
        Json stats;
        for (Scalar s : all_scalars()) {
            stats[std::string(scalar_name(s))] = stat_to_json(cell.stats[static_cast<std::size_t>(s)]);
        }
        c["stats"] = std::move(stats);
        Json runs = Json::array();
        for (const auto& run : cell.runs) {
            Json r;
            r["seed"] = run.config.seed;
            Json scalars;
            for (Scalar s : all_scalars()) scalars[std::string(scalar_name(s))] = optional_number(run.get(s));
            r["scalars"] = std::move(scalars);
            r["degree_histogram"] = histogram_to_json(run.degree_histogram);
            runs.push_back(std::move(r));
        }
        c["runs"] = std::move(runs);
        cells.push_back(std::move(c));
    }
    j["cells"] = std::move(cells);
    return j;
}

void write_sweep_json(const SweepReport& report, const std::filesystem::path& path) {
    write_json(path, sweep_to_json(report));
}

}  // namespace gnmn
