#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "gnmn/io.hpp"

namespace gnmn {

namespace {

std::string axis_name(std::size_t k) {
    static constexpr const char* kNames[] = {"x", "y", "z"};
    return k < 3 ? kNames[k] : "c" + std::to_string(k);
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) throw std::runtime_error("graphml: bad number for " + what + ": '" + s + "'");
    return v;
}

}  // namespace

std::string graphml_text(const GraphSnapshot& g, const GraphAnnotations& notes) {
    const auto comps = connected_components(g);
    const std::size_t dim = g.region().dim();
    std::vector<bool> is_source(g.n(), false);
    for (NodeId s : notes.second_hop_sources) {
        if (s < g.n()) is_source[s] = true;
    }

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
           "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
           "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
           "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
    out << "  <key id=\"r\" for=\"graph\" attr.name=\"r\" attr.type=\"double\"/>\n"
        << "  <key id=\"phase\" for=\"graph\" attr.name=\"phase\" attr.type=\"long\"/>\n";
    for (std::size_t k = 0; k < dim; ++k) {
        out << "  <key id=\"extent" << k << "\" for=\"graph\" attr.name=\"extent" << k
            << "\" attr.type=\"double\"/>\n";
    }
    out << "  <key id=\"config_hash\" for=\"graph\" attr.name=\"config_hash\" attr.type=\"string\"/>\n";
    for (std::size_t k = 0; k < dim; ++k) {
        const auto name = axis_name(k);
        out << "  <key id=\"" << name << "\" for=\"node\" attr.name=\"" << name
            << "\" attr.type=\"double\"/>\n";
    }
    out << "  <key id=\"degree\" for=\"node\" attr.name=\"degree\" attr.type=\"long\"/>\n"
        << "  <key id=\"component_id\" for=\"node\" attr.name=\"component_id\" attr.type=\"long\"/>\n"
        << "  <key id=\"source\" for=\"node\" attr.name=\"source\" attr.type=\"boolean\"/>\n";

    out << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
    out << "    <data key=\"r\">" << format_double(g.radius()) << "</data>\n";
    out << "    <data key=\"phase\">" << g.phase() << "</data>\n";
    for (std::size_t k = 0; k < dim; ++k) {
        out << "    <data key=\"extent" << k << "\">" << format_double(g.region().extent(k)) << "</data>\n";
    }
    out << "    <data key=\"config_hash\">" << xml_escape(notes.config_hash) << "</data>\n";

    for (NodeId i = 0; i < g.n(); ++i) {
        out << "    <node id=\"n" << i << "\">";
        const auto p = g.positions()[i];
        for (std::size_t k = 0; k < dim; ++k) {
            out << "<data key=\"" << axis_name(k) << "\">" << format_double(p[k]) << "</data>";
        }
        out << "<data key=\"degree\">" << g.degree(i) << "</data>"
            << "<data key=\"component_id\">" << comps.labels[i] << "</data>"
            << "<data key=\"source\">" << (is_source[i] ? "true" : "false") << "</data></node>\n";
    }
    for (const Edge& e : g.edges()) {
        out << "    <edge source=\"n" << e.first << "\" target=\"n" << e.second << "\"/>\n";
    }
    out << "  </graph>\n</graphml>\n";
    return out.str();
}

void export_graphml(const GraphSnapshot& g, const std::filesystem::path& path,
                    const GraphAnnotations& notes) {
    write_text(path, graphml_text(g, notes));
}

StoredGraph parse_graphml(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_xml(in, tree);
    } catch (const pt::xml_parser_error& e) {
        throw std::runtime_error(std::string("graphml: ") + e.what());
    }
    const auto root = tree.get_child_optional("graphml");
    if (!root) throw std::runtime_error("graphml: missing <graphml> root");

    std::map<std::string, std::string> key_names;  // key id -> attr.name
    const pt::ptree* graph = nullptr;
    for (const auto& [tag, child] : *root) {
        if (tag == "key") {
            key_names[child.get<std::string>("<xmlattr>.id")] = child.get<std::string>(pt::ptree::path_type("<xmlattr>/attr.name", '/'), "");
        } else if (tag == "graph") {
            graph = &child;
        }
    }
    if (!graph) throw std::runtime_error("graphml: missing <graph>");

    double r = 0.0;
    std::size_t phase = 0;
    std::map<std::size_t, double> extents;
    StoredGraph out;
    std::map<std::string, NodeId> node_index;
    std::vector<std::map<std::string, std::string>> node_data;
    std::vector<std::pair<std::string, std::string>> raw_edges;

    for (const auto& [tag, child] : *graph) {
        if (tag == "data") {
            const auto name = key_names[child.get<std::string>("<xmlattr>.key")];
            const auto value = child.get_value<std::string>();
            if (name == "r") {
                r = parse_double(value, "r");
            } else if (name == "phase") {
                phase = static_cast<std::size_t>(parse_double(value, "phase"));
            } else if (name.starts_with("extent")) {
                extents[std::stoul(name.substr(6))] = parse_double(value, name);
            } else if (name == "config_hash") {
                out.annotations.config_hash = value;
            }
        } else if (tag == "node") {
            const auto id = child.get<std::string>("<xmlattr>.id");
            if (node_index.contains(id)) throw std::runtime_error("graphml: duplicate node id " + id);
            node_index[id] = static_cast<NodeId>(node_data.size());
            auto& data = node_data.emplace_back();
            for (const auto& [t, d] : child) {
                if (t == "data") data[key_names[d.get<std::string>("<xmlattr>.key")]] = d.get_value<std::string>();
            }
        } else if (tag == "edge") {
            raw_edges.emplace_back(child.get<std::string>("<xmlattr>.source"),
                                   child.get<std::string>("<xmlattr>.target"));
        }
    }
    if (extents.empty()) throw std::runtime_error("graphml: region extents missing");
    std::vector<double> dims;
    for (std::size_t k = 0; k < extents.size(); ++k) {
        if (!extents.contains(k)) throw std::runtime_error("graphml: region extents incomplete");
        dims.push_back(extents[k]);
    }

    PointSet positions(node_data.size(), dims.size());
    for (std::size_t i = 0; i < node_data.size(); ++i) {
        auto p = positions[i];
        for (std::size_t k = 0; k < dims.size(); ++k) {
            const auto name = axis_name(k);
            const auto it = node_data[i].find(name);
            if (it == node_data[i].end()) throw std::runtime_error("graphml: node without coordinate " + name);
            p[k] = parse_double(it->second, name);
        }
        const auto src = node_data[i].find("source");
        if (src != node_data[i].end() && src->second == "true") {
            out.annotations.second_hop_sources.push_back(static_cast<NodeId>(i));
        }
    }
    std::vector<Edge> edges;
    edges.reserve(raw_edges.size());
    for (const auto& [a, b] : raw_edges) {
        const auto ia = node_index.find(a);
        const auto ib = node_index.find(b);
        if (ia == node_index.end() || ib == node_index.end()) {
            throw std::runtime_error("graphml: edge refers to unknown node");
        }
        edges.emplace_back(ia->second, ib->second);
    }
    out.snapshot = GraphSnapshot(Region(dims), std::move(positions), r, phase, edges);
    return out;
}

StoredGraph import_graphml(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graphml(buf.str());
}

}  // namespace gnmn
