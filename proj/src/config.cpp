#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "gnmn/error.hpp"
#include "gnmn/io.hpp"

namespace gnmn {

namespace {

const std::set<std::string> kTopKeys = {"n",      "dimensions", "r",       "velocity",
                                        "t_rest", "t_move",     "p_stat",  "n_moves",
                                        "seed",   "metrics_each_phase", "sweep"};
const std::set<std::string> kSweepKeys = {"parameter", "values", "seeds"};
const std::set<std::string> kSweepParameters = {"r", "velocity", "t_rest", "p_stat", "n_moves"};

[[noreturn]] void bad_value(const std::string& key, const std::string& what) {
    throw ConfigValueError("config key '" + key + "': " + what, key);
}

void reject_unknown(const Json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key)) {
            const std::string path = prefix.empty() ? key : prefix + "." + key;
            throw ConfigKeyError("unknown config key '" + path + "'", path);
        }
    }
}

double read_number(const Json& v, const std::string& key) {
    if (!v.is_number()) bad_value(key, "expected a number");
    return v.get<double>();
}

std::uint64_t read_unsigned(const Json& v, const std::string& key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) bad_value(key, "must be non-negative");
    bad_value(key, "expected a non-negative integer");
}

// Re-validates through SimulationConfig::validate and maps the failure to
// the key it concerns.
void check_constraints(const SimulationConfig& c) {
    if (c.n < 1) bad_value("n", "must be >= 1");
    if (c.dimensions.empty()) bad_value("dimensions", "must list at least one axis");
    for (std::size_t k = 0; k < c.dimensions.size(); ++k) {
        if (!(c.dimensions[k] > 0.0)) bad_value("dimensions[" + std::to_string(k) + "]", "must be > 0");
    }
    if (!(c.r > 0.0)) bad_value("r", "must be > 0");
    if (!(c.velocity > 0.0)) bad_value("velocity", "must be > 0");
    if (c.t_move < 1) bad_value("t_move", "must be >= 1");
    if (!(c.p_stat >= 0.0 && c.p_stat <= 1.0)) bad_value("p_stat", "must be in [0, 1]");
    if (c.n_moves > c.n) bad_value("n_moves", "must not exceed n");
}

}  // namespace

ConfigFile parse_config(const Json& doc) {
    if (!doc.is_object()) throw ConfigSyntaxError("config must be a JSON object", "");
    reject_unknown(doc, kTopKeys, "");

    ConfigFile out;
    SimulationConfig& c = out.config;
    if (doc.contains("n")) c.n = read_unsigned(doc["n"], "n");
    if (doc.contains("dimensions")) {
        const auto& dims = doc["dimensions"];
        if (!dims.is_array() || dims.empty()) bad_value("dimensions", "expected a non-empty array");
        c.dimensions.clear();
        for (std::size_t k = 0; k < dims.size(); ++k) {
            c.dimensions.push_back(read_number(dims[k], "dimensions[" + std::to_string(k) + "]"));
        }
    }
    if (doc.contains("r")) c.r = read_number(doc["r"], "r");
    if (doc.contains("velocity")) c.velocity = read_number(doc["velocity"], "velocity");
    if (doc.contains("t_rest")) c.t_rest = read_unsigned(doc["t_rest"], "t_rest");
    if (doc.contains("t_move")) c.t_move = read_unsigned(doc["t_move"], "t_move");
    if (doc.contains("p_stat")) c.p_stat = read_number(doc["p_stat"], "p_stat");
    if (doc.contains("n_moves")) {
        c.n_moves = read_unsigned(doc["n_moves"], "n_moves");
    } else {
        c.n_moves = std::min<std::size_t>(c.n_moves, c.n);
    }
    if (doc.contains("seed")) c.seed = read_unsigned(doc["seed"], "seed");
    if (doc.contains("metrics_each_phase")) {
        if (!doc["metrics_each_phase"].is_boolean()) bad_value("metrics_each_phase", "expected a boolean");
        c.metrics_each_phase = doc["metrics_each_phase"].get<bool>();
    }
    check_constraints(c);

    if (doc.contains("sweep")) {
        const auto& s = doc["sweep"];
        if (!s.is_object()) bad_value("sweep", "expected an object");
        reject_unknown(s, kSweepKeys, "sweep");
        SweepSpec spec;
        spec.base = c;
        if (!s.contains("parameter") || !s["parameter"].is_string()) {
            bad_value("sweep.parameter", "expected a parameter name");
        }
        spec.parameter = s["parameter"].get<std::string>();
        if (!s.contains("values") || !s["values"].is_array() || s["values"].empty()) {
            bad_value("sweep.values", "expected a non-empty array");
        }
        for (std::size_t k = 0; k < s["values"].size(); ++k) {
            spec.values.push_back(read_number(s["values"][k], "sweep.values[" + std::to_string(k) + "]"));
        }
        if (!s.contains("seeds")) {
            for (std::uint64_t k = 0; k < 5; ++k) spec.replicates.push_back(k);
        } else if (s["seeds"].is_array()) {
            for (std::size_t k = 0; k < s["seeds"].size(); ++k) {
                spec.replicates.push_back(read_unsigned(s["seeds"][k], "sweep.seeds[" + std::to_string(k) + "]"));
            }
            if (spec.replicates.empty()) bad_value("sweep.seeds", "expected at least one seed");
        } else {
            const auto count = read_unsigned(s["seeds"], "sweep.seeds");
            if (count == 0) bad_value("sweep.seeds", "must be >= 1");
            for (std::uint64_t k = 0; k < count; ++k) spec.replicates.push_back(k);
        }
        if (!kSweepParameters.contains(spec.parameter)) {
            bad_value("sweep.parameter", "unknown parameter '" + spec.parameter +
                                             "' (expected r, velocity, t_rest, p_stat or n_moves)");
        }
        for (std::size_t k = 0; k < spec.values.size(); ++k) {
            const std::string key = "sweep.values[" + std::to_string(k) + "]";
            try {
                apply_parameter(spec.base, spec.parameter, spec.values[k]).validate();
            } catch (const UsageError& e) {
                bad_value(key, e.what());
            }
        }
        out.sweep = std::move(spec);
    }
    return out;
}

ConfigFile parse_config_text(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigSyntaxError(std::string("malformed config: ") + e.what(), "");
    }
    return parse_config(doc);
}

ConfigFile load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigFileError("cannot read config file '" + path.string() + "'", "");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config_text(buf.str());
    } catch (const ConfigSyntaxError& e) {
        throw ConfigSyntaxError(path.string() + ": " + e.what(), e.key_path());
    }
}

Json config_to_json(const SimulationConfig& c) {
    Json j;
    j["n"] = c.n;
    j["dimensions"] = c.dimensions;
    j["r"] = c.r;
    j["velocity"] = c.velocity;
    j["t_rest"] = c.t_rest;
    j["t_move"] = c.t_move;
    j["p_stat"] = c.p_stat;
    j["n_moves"] = c.n_moves;
    j["seed"] = c.seed;
    j["metrics_each_phase"] = c.metrics_each_phase;
    return j;
}

Json config_file_to_json(const ConfigFile& file) {
    Json j = config_to_json(file.config);
    if (file.sweep) {
        Json s;
        s["parameter"] = file.sweep->parameter;
        s["values"] = file.sweep->values;
        s["seeds"] = file.sweep->replicates;
        j["sweep"] = std::move(s);
    }
    return j;
}

std::string config_hash(const SimulationConfig& config) {
    const std::string canonical = config_to_json(config).dump();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace gnmn
