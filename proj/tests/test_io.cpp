#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "gnmn/io.hpp"
#include "oracles.hpp"

using namespace gnmn;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "gnmn-io-tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

std::size_t circles_with_fill(const std::string& svg, const std::string& fill) {
    std::istringstream lines(svg);
    std::size_t n = 0;
    for (std::string line; std::getline(lines, line);) {
        if (line.find("<circle ") != std::string::npos && line.find("fill=\"" + fill + "\"") != std::string::npos) ++n;
    }
    return n;
}

template <typename E>
std::string key_of(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const E& e) {
        return e.key_path();
    }
    return "<no error>";
}

SweepReport tiny_sweep() {
    SweepSpec spec;
    spec.base.n = 200;
    spec.base.n_moves = 20;
    spec.base.t_move = 3;
    spec.parameter = "r";
    spec.values = {0.3, 0.9};
    spec.replicates = {0, 1, 2};
    return run_sweep(spec, 2);
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
    const auto f = parse_config_text(R"({"n": 10, "r": 0.5})");
    CHECK(f.config.n == 10);
    CHECK(f.config.r == 0.5);
    CHECK(f.config.velocity == 0.5);
    CHECK(f.config.t_rest == 10);
    CHECK(f.config.t_move == 20);
    CHECK(f.config.p_stat == 0.8);
    CHECK(f.config.n_moves == 10);
    CHECK(f.config.dimensions == std::vector<double>{12.0, 12.0});
    CHECK_FALSE(f.sweep.has_value());
    CHECK(parse_config_text("{}").config == SimulationConfig{});
}

TEST_CASE("config errors carry a class and key path") {
    CHECK(key_of<ConfigValueError>(R"({"p_stat": 1.5})") == "p_stat");
    CHECK(key_of<ConfigValueError>(R"({"n": -3})") == "n");
    CHECK(key_of<ConfigValueError>(R"({"t_rest": 2.5})") == "t_rest");
    CHECK(key_of<ConfigValueError>(R"({"dimensions": [12, 0]})") == "dimensions[1]");
    CHECK(key_of<ConfigValueError>(R"({"n": 10, "n_moves": 11})") == "n_moves");
    CHECK(key_of<ConfigValueError>(R"({"r": "big"})") == "r");
    CHECK(key_of<ConfigKeyError>(R"({"radius": 0.5})") == "radius");
    CHECK(key_of<ConfigKeyError>(R"({"sweep": {"parameter": "r", "values": [0.1], "step": 2}})") == "sweep.step");
    CHECK(key_of<ConfigValueError>(R"({"sweep": {"parameter": "n", "values": [1]}})") == "sweep.parameter");
    CHECK(key_of<ConfigValueError>(R"({"sweep": {"parameter": "t_rest", "values": [1.5]}})") == "sweep.values[0]");
    CHECK_THROWS_AS(parse_config_text("{\"n\": 10,"), ConfigSyntaxError);
    CHECK_THROWS_AS(parse_config_text("[1, 2]"), ConfigSyntaxError);
    CHECK_THROWS_AS(load_config(scratch("does-not-exist.json")), ConfigFileError);
}

TEST_CASE("config round trip") {
    const auto text = R"({"n": 2000, "dimensions": [12, 12], "r": 0.65, "velocity": 0.5, "t_rest": 10,
        "t_move": 20, "p_stat": 0.8, "n_moves": 100, "seed": 7,
        "sweep": {"parameter": "velocity", "values": [0.3, 0.5, 0.7, 0.9, 1.1], "seeds": 5}})";
    const auto a = parse_config_text(text);
    REQUIRE(a.sweep);
    CHECK(a.sweep->replicates.size() == 5);
    const auto path = scratch("roundtrip.json");
    write_json(path, config_file_to_json(a));
    const auto b = load_config(path);
    CHECK(a.config == b.config);
    REQUIRE(b.sweep);
    CHECK(a.sweep->values == b.sweep->values);
    CHECK(a.sweep->replicates == b.sweep->replicates);
    CHECK(config_hash(a.config) == config_hash(b.config));
    auto c = a.config;
    c.seed = 8;
    CHECK(config_hash(c) != config_hash(a.config));
    CHECK(config_hash(c).size() == 16);
}

TEST_CASE("double formatting is shortest and locale free") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(12.0) == "12");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("metrics csv layout") {
    CHECK(metrics_csv({}) == std::string(kMetricsCsvHeader) + "\n");
    const auto report = tiny_sweep();
    const auto csv = metrics_csv(metrics_rows(report));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == kMetricsCsvHeader);
    const auto columns = std::count(line.begin(), line.end(), ',');
    while (std::getline(lines, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == columns);
        CHECK(line.rfind("r,", 0) == 0);
    }
    CHECK(csv == metrics_csv(metrics_rows(tiny_sweep())));
}

TEST_CASE("missing path length is an empty csv field") {
    SimulationConfig c;
    c.n = 50;
    c.r = 0.01;
    c.n_moves = 5;
    c.t_move = 1;
    const auto csv = metrics_csv(metrics_rows(summarize(run_simulation(c))));
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    std::vector<std::string> fields;
    std::stringstream row(line);
    for (std::string f; std::getline(row, f, ',');) fields.push_back(f);
    REQUIRE(fields.size() == 15);
    CHECK(fields[0] == "none");
    CHECK(fields[1].empty());
    CHECK(fields[10].empty());
}

TEST_CASE("sweep json carries stats per cell") {
    const auto j = sweep_to_json(tiny_sweep());
    REQUIRE(j["cells"].size() == 2);
    CHECK(j["cells"][0]["value"] == 0.3);
    CHECK(j["cells"][0]["runs"].size() == 3);
    CHECK(j["cells"][0]["stats"]["mean_degree"]["count"] == 3);
}

TEST_CASE("graphml triangle round trip") {
    gnmn::PointSet p(0, 2);
    p.push_back(std::vector<double>{1.0, 1.0});
    p.push_back(std::vector<double>{1.3, 1.0});
    p.push_back(std::vector<double>{1.0, 1.3});
    const Region region({4.0, 4.0});
    const auto g = build_graph(p, 0.5, region, 3);
    const auto text = graphml_text(g, {"abc", {2}});
    CHECK(count(text, "<node ") == 3);
    CHECK(count(text, "<edge ") == 3);
    const auto back = parse_graphml(text);
    CHECK(back.snapshot.edges() == g.edges());
    CHECK(back.snapshot.positions() == g.positions());
    CHECK(back.snapshot.radius() == 0.5);
    CHECK(back.snapshot.phase() == 3);
    CHECK(back.snapshot.region() == region);
    CHECK(back.annotations.config_hash == "abc");
    CHECK(back.annotations.second_hop_sources == std::vector<NodeId>{2});
}

TEST_CASE("graphml of a large snapshot keeps counts and coordinates bitwise") {
    Rng rng(3);
    const Region region({12.0, 12.0});
    const auto g = build_graph(sample_positions(2000, region, rng), 0.65, region);
    const auto path = scratch("big.graphml");
    export_graphml(g, path);
    const auto text = slurp(path);
    CHECK(count(text, "<node ") == 2000);
    CHECK(count(text, "<edge ") == g.edge_count());
    const auto back = import_graphml(path);
    CHECK(back.snapshot.positions() == g.positions());
    CHECK(back.snapshot.edges() == g.edges());
}

TEST_CASE("graphml import rejects malformed input") {
    CHECK_THROWS(parse_graphml("<graphml><graph>"));
    CHECK_THROWS(parse_graphml("<notgraphml/>"));
    CHECK_THROWS(import_graphml(scratch("missing.graphml")));
}

TEST_CASE("node class precedence") {
    StepDelta d;
    d.moved = {1, 4};
    d.gained_nodes = {1, 2};
    d.isolated_nodes = {2, 3, 4};
    CHECK(primary_class(d, 1) == NodeClass::moved);
    CHECK(primary_class(d, 4) == NodeClass::moved);
    CHECK(primary_class(d, 2) == NodeClass::gained);
    CHECK(primary_class(d, 3) == NodeClass::isolated);
    CHECK(primary_class(d, 0) == NodeClass::plain);
}

TEST_CASE("svg draws one arrow per moved node") {
    SimulationConfig c;
    c.n = 400;
    c.n_moves = 40;
    c.t_move = 1;
    RunOptions o;
    o.keep_snapshots = true;
    const auto t = run_simulation(c, o);
    const auto& delta = t.phases[0].delta;
    const auto svg = snapshot_svg(t.snapshots[0], t.snapshots[1], delta, {800, 20, 2, "feed"});
    CHECK(count(svg, "class=\"arrow\"") == delta.moved.size());
    CHECK(count(svg, "<circle ") == 400);
    CHECK(count(svg, "<line ") == t.snapshots[1].edge_count() + delta.moved.size());
    CHECK(svg.find("data-config-hash=\"feed\"") != std::string::npos);
    CHECK(circles_with_fill(svg, "red") == delta.moved.size());
    CHECK(svg == snapshot_svg(t.snapshots[0], t.snapshots[1], delta, {800, 20, 2, "feed"}));
}

TEST_CASE("svg at a tiny radius is dominated by moved and isolated nodes") {
    SimulationConfig c;
    c.r = 0.05;
    c.t_move = 1;
    RunOptions o;
    o.keep_snapshots = true;
    const auto t = run_simulation(c, o);
    const auto& delta = t.phases[0].delta;
    const auto svg = snapshot_svg(t.snapshots[0], t.snapshots[1], delta);
    const std::size_t flagged = circles_with_fill(svg, "red") + circles_with_fill(svg, "blue");
    MESSAGE("red or blue nodes: " << flagged << " of " << c.n);
    CHECK(flagged >= 0.85 * c.n);
    // Every unflagged node is a non-mover with at least one neighbor.
    for (NodeId i = 0; i < c.n; ++i) {
        const auto cls = primary_class(delta, i);
        if (cls == NodeClass::plain) CHECK(t.snapshots[1].degree(i) > 0);
    }
}
