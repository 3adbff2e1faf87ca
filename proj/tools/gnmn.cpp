// gnmn: generate, simulate, sweep and analyse geometric networks with
// mobile nodes. Data goes to files; every message goes to stderr.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gnmn/error.hpp"
#include "gnmn/harness.hpp"
#include "gnmn/io.hpp"

namespace fs = std::filesystem;
using namespace gnmn;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct Overrides {
    std::optional<double> r;
    std::optional<double> velocity;
    std::optional<std::uint64_t> t_rest;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> n;
    std::optional<std::uint64_t> n_moves;
    std::optional<std::uint64_t> phases;
};

struct CommonArgs {
    std::string config;
    std::string out;
    Overrides overrides;
    unsigned threads = 0;
    int verbosity = 0;
};

class CliUsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_overrides = true) {
    cmd->add_option("--config", args.config, "JSON config file (flags override its values)");
    cmd->add_option("--out", args.out,
                    "output directory (default: $GNMN_OUT_DIR or ./gnmn-out, then /<config hash>)");
    cmd->add_option("--threads", args.threads,
                    "worker threads; 0 = all cores, 1 = sequential reference mode")
        ->capture_default_str();
    cmd->add_flag("-v,--verbose", args.verbosity, "progress messages on stderr");
    if (!with_overrides) return;
    auto& o = args.overrides;
    cmd->add_option("--n", o.n, "number of nodes (default 2000)");
    cmd->add_option("--r", o.r, "connection radius (default 0.65)");
    cmd->add_option("--velocity", o.velocity, "velocity factor (default 0.5)");
    cmd->add_option("--t-rest", o.t_rest, "rest phases after a move (default 10)");
    cmd->add_option("--phases", o.phases, "movement phases t_move (default 20)");
    cmd->add_option("--n-moves", o.n_moves, "movers selected per phase (default 100)");
    cmd->add_option("--seed", o.seed, "RNG seed (default 1)");
}

Json base_document(const CommonArgs& args) {
    if (args.config.empty()) return Json::object();
    // Validate first for precise error classes, then merge overrides into
    // the raw document so absent keys keep their derived defaults.
    load_config(args.config);
    std::ifstream in(args.config);
    return Json::parse(in);
}

ConfigFile resolve_config(const CommonArgs& args) {
    Json doc = base_document(args);
    const auto& o = args.overrides;
    if (o.n) doc["n"] = *o.n;
    if (o.r) doc["r"] = *o.r;
    if (o.velocity) doc["velocity"] = *o.velocity;
    if (o.t_rest) doc["t_rest"] = *o.t_rest;
    if (o.phases) doc["t_move"] = *o.phases;
    if (o.n_moves) doc["n_moves"] = *o.n_moves;
    if (o.seed) doc["seed"] = *o.seed;
    return parse_config(doc);
}

fs::path output_dir(const CommonArgs& args, const SimulationConfig& config) {
    if (!args.out.empty()) return args.out;
    const char* env = std::getenv("GNMN_OUT_DIR");
    const fs::path root = env && *env ? fs::path(env) : fs::path("gnmn-out");
    return root / config_hash(config);
}

void log(const CommonArgs& args, const std::string& msg) {
    if (args.verbosity > 0) std::cerr << "gnmn: " << msg << "\n";
}

fs::path phase_file(const fs::path& dir, std::size_t phase, const char* ext) {
    return dir / ("phase_" + std::to_string(phase) + ext);
}

Json phase_to_json(const PhaseRecord& p) {
    Json j;
    j["phase"] = p.phase;
    j["moved"] = p.delta.moved.size();
    j["new_edges"] = p.delta.new_edges.size();
    j["lost_edges"] = p.delta.lost_edges.size();
    j["gained_nodes"] = p.delta.gained_nodes.size();
    j["isolated_nodes"] = p.delta.isolated_nodes.size();
    j["ever_moved"] = p.ever_moved;
    j["eligible"] = p.mobility.eligible;
    j["selected"] = p.mobility.selected;
    j["proposals"] = p.mobility.proposals;
    j["rejections"] = p.mobility.rejections;
    if (p.metrics) j["metrics"] = metrics_to_json(*p.metrics);
    return j;
}

int cmd_generate(const CommonArgs& args) {
    const auto file = resolve_config(args);
    const auto& config = file.config;
    const fs::path dir = output_dir(args, config);
    const auto hash = config_hash(config);
    Rng rng(config.seed);
    const Region region = config.region();
    const auto positions = sample_positions(config.n, region, rng);
    const auto g = build_graph(positions, config.r, region, 0);
    const StepDelta delta = diff_graphs(g, g, {});

    write_json(dir / "config.json", config_to_json(config));
    export_graphml(g, dir / "snapshots" / "phase_0.graphml", {hash, {}});
    SvgOptions svg;
    svg.config_hash = hash;
    export_snapshot_svg(g, g, delta, dir / "snapshots" / "phase_0.svg", svg);
    MetricsOptions mo;
    mo.threads = args.threads;
    Json doc;
    doc["config_hash"] = hash;
    doc["phase"] = 0;
    doc["metrics"] = metrics_to_json(compute_metrics(g, {}, mo));
    write_json(dir / "metrics.json", doc);
    std::cerr << "gnmn: wrote initial snapshot to " << dir.string() << "\n";
    return 0;
}

int cmd_simulate(const CommonArgs& args, const std::string& snapshots) {
    const auto file = resolve_config(args);
    const auto& config = file.config;
    const fs::path dir = output_dir(args, config);
    const auto hash = config_hash(config);
    RunOptions options;
    options.threads = args.threads;
    options.keep_snapshots = snapshots == "all";
    log(args, "simulating " + std::to_string(config.t_move) + " phases, config " + hash);
    const auto trace = run_simulation(config, options);
    const auto summary = summarize(trace);

    write_json(dir / "config.json", config_to_json(config));
    write_metrics_csv(metrics_rows(summary), dir / "metrics.csv");
    Json doc;
    doc["config_hash"] = hash;
    doc["config"] = config_to_json(config);
    doc["phase"] = config.t_move;
    doc["metrics"] = metrics_to_json(trace.final_metrics);
    doc["prediction"] = prediction_to_json(trace.prediction);
    doc["comparison"] = comparison_to_json(trace.comparison);
    Json phases = Json::array();
    for (const auto& p : trace.phases) phases.push_back(phase_to_json(p));
    doc["phases"] = std::move(phases);
    write_json(dir / "metrics.json", doc);

    if (snapshots != "none") {
        const fs::path sdir = dir / "snapshots";
        SvgOptions svg;
        svg.config_hash = hash;
        if (snapshots == "all") {
            // Sources at phase k are the nodes moved in phases 1..k.
            std::vector<bool> moved(config.n, false);
            for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
                const auto& g = trace.snapshots[k];
                if (k > 0) {
                    for (NodeId i : trace.phases[k - 1].delta.moved) moved[i] = true;
                }
                GraphAnnotations notes{hash, {}};
                for (NodeId i = 0; i < config.n; ++i) {
                    if (moved[i]) notes.second_hop_sources.push_back(i);
                }
                export_graphml(g, phase_file(sdir, k, ".graphml"), notes);
                if (k == 0) {
                    export_snapshot_svg(g, g, diff_graphs(g, g, {}), phase_file(sdir, 0, ".svg"), svg);
                } else {
                    export_snapshot_svg(trace.snapshots[k - 1], g, trace.phases[k - 1].delta,
                                        phase_file(sdir, k, ".svg"), svg);
                }
            }
        } else {
            const std::size_t k = config.t_move;
            export_graphml(trace.final_snapshot, phase_file(sdir, k, ".graphml"), {hash, trace.ever_moved});
        }
    }
    std::cerr << "gnmn: simulation written to " << dir.string() << "\n";
    return 0;
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw CliUsageError("--values: '" + item + "' is not a number");
        }
    }
    if (out.empty()) throw CliUsageError("--values: expected a comma-separated list");
    return out;
}

int cmd_sweep(const CommonArgs& args, const std::string& param, const std::string& values,
              std::optional<std::uint64_t> seeds) {
    const auto file = resolve_config(args);
    SweepSpec spec;
    if (file.sweep) spec = *file.sweep;
    spec.base = file.config;
    if (!param.empty()) spec.parameter = param;
    if (!values.empty()) spec.values = parse_values(values);
    if (seeds) {
        if (*seeds == 0) throw CliUsageError("--seeds must be >= 1");
        spec.replicates.clear();
        for (std::uint64_t k = 0; k < *seeds; ++k) spec.replicates.push_back(k);
    }
    if (spec.replicates.empty()) {
        for (std::uint64_t k = 0; k < 5; ++k) spec.replicates.push_back(k);
    }
    if (spec.parameter.empty()) throw CliUsageError("sweep needs --param (or a sweep section in --config)");
    if (spec.values.empty()) throw CliUsageError("sweep needs --values (or a sweep section in --config)");

    const auto& o = args.overrides;
    const bool conflict = (spec.parameter == "r" && o.r) || (spec.parameter == "velocity" && o.velocity) ||
                          (spec.parameter == "t_rest" && o.t_rest) ||
                          (spec.parameter == "n_moves" && o.n_moves);
    if (conflict) {
        throw CliUsageError("--" + spec.parameter + " conflicts with sweeping '" + spec.parameter +
                            "'; drop the override");
    }
    try {
        spec.validate();
    } catch (const UsageError& e) {
        throw CliUsageError(e.what());
    }

    const fs::path dir = output_dir(args, spec.base);
    log(args, "sweeping " + spec.parameter + " over " + std::to_string(spec.values.size()) + " values x " +
                  std::to_string(spec.replicates.size()) + " seeds");
    const auto report = run_sweep(spec, args.threads);
    ConfigFile echo{spec.base, spec};
    write_json(dir / "config.json", config_file_to_json(echo));
    write_metrics_csv(metrics_rows(report), dir / "metrics.csv");
    write_sweep_json(report, dir / "sweep.json");
    std::cerr << "gnmn: sweep written to " << dir.string() << "\n";
    return 0;
}

int cmd_metrics(const CommonArgs& args, const std::string& in) {
    const auto stored = import_graphml(in);
    const auto& g = stored.snapshot;
    MetricsOptions mo;
    mo.threads = args.threads;
    const auto report = compute_metrics(g, stored.annotations.second_hop_sources, mo);
    const double area = g.region().area();
    const auto prediction = predict(g.n(), g.radius(), area);

    Json doc;
    doc["config_hash"] = stored.annotations.config_hash;
    doc["input"] = in;
    doc["phase"] = g.phase();
    doc["metrics"] = metrics_to_json(report);
    doc["prediction"] = prediction_to_json(prediction);
    doc["comparison"] = comparison_to_json(compare(prediction, observe(report, g.radius(), area)));
    const fs::path dir = args.out.empty() ? fs::path(in).parent_path() : fs::path(args.out);
    const fs::path target = dir / (fs::path(in).stem().string() + ".metrics.json");
    write_json(target, doc);
    std::cerr << "gnmn: n=" << report.n << " edges=" << report.edge_count
              << " mean_degree=" << format_double(report.degrees.mean)
              << " components=" << report.component_count << "; wrote " << target.string() << "\n";
    return 0;
}

int cmd_export(const CommonArgs& args, const std::string& snapshot_dir, std::optional<std::size_t> only) {
    const fs::path sdir = snapshot_dir;
    const fs::path dir = args.out.empty() ? sdir : fs::path(args.out);
    std::vector<std::size_t> phases;
    static const std::regex pattern(R"(phase_(\d+)\.graphml)");
    if (!fs::is_directory(sdir)) throw CliUsageError("--snapshots: '" + snapshot_dir + "' is not a directory");
    for (const auto& entry : fs::directory_iterator(sdir)) {
        std::smatch m;
        const std::string name = entry.path().filename().string();
        if (std::regex_match(name, m, pattern)) phases.push_back(std::stoul(m[1]));
    }
    std::sort(phases.begin(), phases.end());
    if (only) {
        if (!std::binary_search(phases.begin(), phases.end(), *only)) {
            throw CliUsageError("no phase_" + std::to_string(*only) + ".graphml in " + snapshot_dir);
        }
        phases = {*only};
    }
    if (phases.empty()) throw CliUsageError("no phase_<k>.graphml files in " + snapshot_dir);

    for (std::size_t k : phases) {
        const auto after = import_graphml(phase_file(sdir, k, ".graphml"));
        SvgOptions svg;
        svg.config_hash = after.annotations.config_hash;
        const auto prev = phase_file(sdir, k == 0 ? 0 : k - 1, ".graphml");
        if (k == 0 || !fs::exists(prev)) {
            const auto& g = after.snapshot;
            export_snapshot_svg(g, g, diff_graphs(g, g, {}), phase_file(dir, k, ".svg"), svg);
        } else {
            const auto before = import_graphml(prev);
            const auto moved = changed_positions(before.snapshot.positions(), after.snapshot.positions());
            const auto delta = diff_graphs(before.snapshot, after.snapshot, moved);
            export_snapshot_svg(before.snapshot, after.snapshot, delta, phase_file(dir, k, ".svg"), svg);
        }
        log(args, "rendered phase " + std::to_string(k));
    }
    std::cerr << "gnmn: rendered " << phases.size() << " snapshot(s) into " << dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geometric networks with mobile nodes: simulation, sweeps and metrics"};
    app.require_subcommand(1);

    CommonArgs generate_args, simulate_args, sweep_args, metrics_args, export_args;

    auto* generate = app.add_subcommand("generate", "place nodes and write the initial snapshot");
    add_common(generate, generate_args);

    auto* simulate = app.add_subcommand("simulate", "run all movement phases and write metrics and snapshots");
    add_common(simulate, simulate_args);
    std::string snapshots = "all";
    simulate->add_option("--snapshots", snapshots, "which phases to export: all, final or none")
        ->check(CLI::IsMember({"all", "final", "none"}))
        ->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "vary one parameter over values x seeds");
    add_common(sweep, sweep_args);
    std::string param, values;
    std::optional<std::uint64_t> seeds;
    sweep->add_option("--param", param, "parameter to sweep: r, velocity, t_rest, p_stat or n_moves");
    sweep->add_option("--values", values, "comma-separated values, e.g. 0.05,0.15,0.25");
    sweep->add_option("--seeds", seeds, "replicates per value (default 5)");

    auto* metrics = app.add_subcommand("metrics", "recompute metrics from a stored GraphML snapshot");
    add_common(metrics, metrics_args, false);
    std::string in;
    metrics->add_option("--in", in, "GraphML file written by simulate or generate")->required();

    auto* exporter = app.add_subcommand("export", "re-render SVG snapshots from stored GraphML files");
    add_common(exporter, export_args, false);
    std::string snapshot_dir;
    std::optional<std::size_t> phase;
    exporter->add_option("--snapshots", snapshot_dir, "directory holding phase_<k>.graphml files")->required();
    exporter->add_option("--phase", phase, "render only this phase");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, std::cerr, std::cerr);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*generate) return cmd_generate(generate_args);
        if (*simulate) return cmd_simulate(simulate_args, snapshots);
        if (*sweep) return cmd_sweep(sweep_args, param, values, seeds);
        if (*metrics) return cmd_metrics(metrics_args, in);
        if (*exporter) return cmd_export(export_args, snapshot_dir, phase);
    } catch (const ConfigError& e) {
        std::cerr << "gnmn: error: " << e.what() << "\n"
                  << "gnmn: fix the config file or the matching flag and rerun\n";
        return kExitUsage;
    } catch (const CliUsageError& e) {
        std::cerr << "gnmn: error: " << e.what() << "\n"
                  << "gnmn: run with --help for the flag reference\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "gnmn: error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "gnmn: runtime failure: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
