#include <algorithm>
#include <charconv>
#include <sstream>

#include "gnmn/error.hpp"
#include "gnmn/io.hpp"

namespace gnmn {

namespace {

std::string px(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 3);
    return std::string(buf, res.ptr);
}

bool contains(const std::vector<NodeId>& sorted, NodeId v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

const char* fill_of(NodeClass c) {
    switch (c) {
        case NodeClass::moved: return "red";
        case NodeClass::gained: return "green";
        case NodeClass::isolated: return "blue";
        case NodeClass::plain: break;
    }
    return "#7f7f7f";
}

}  // namespace

NodeClass primary_class(const StepDelta& delta, NodeId node) {
    if (contains(delta.moved, node)) return NodeClass::moved;
    if (contains(delta.gained_nodes, node)) return NodeClass::gained;
    if (contains(delta.isolated_nodes, node)) return NodeClass::isolated;
    return NodeClass::plain;
}

std::string snapshot_svg(const GraphSnapshot& before, const GraphSnapshot& after,
                         const StepDelta& delta, const SvgOptions& options) {
    const Region& region = after.region();
    const double w = region.extent(0);
    const double h = region.dim() > 1 ? region.extent(1) : 0.0;
    const double scale = (options.width_px - 2.0 * options.margin_px) / w;
    const double height_px = 2.0 * options.margin_px + h * scale;
    // y grows upward in region coordinates.
    auto to_px = [&](std::span<const double> p) {
        const double y = p.size() > 1 ? p[1] : 0.0;
        return std::pair{options.margin_px + p[0] * scale, options.margin_px + (h - y) * scale};
    };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(options.width_px) << "\" height=\""
        << px(height_px) << "\" viewBox=\"0 0 " << px(options.width_px) << " " << px(height_px)
        << "\" data-config-hash=\"" << options.config_hash << "\" data-phase=\"" << after.phase()
        << "\">\n";
    out << "  <defs><marker id=\"arrowhead\" markerWidth=\"6\" markerHeight=\"6\" refX=\"5\" refY=\"3\" "
           "orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"red\"/></marker></defs>\n";
    out << "  <rect x=\"" << px(options.margin_px) << "\" y=\"" << px(options.margin_px) << "\" width=\""
        << px(w * scale) << "\" height=\"" << px(h * scale)
        << "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";

    out << "  <g class=\"edges\" stroke=\"#bbbbbb\" stroke-width=\"0.3\">\n";
    for (const Edge& e : after.edges()) {
        const auto [x1, y1] = to_px(after.positions()[e.first]);
        const auto [x2, y2] = to_px(after.positions()[e.second]);
        out << "    <line x1=\"" << px(x1) << "\" y1=\"" << px(y1) << "\" x2=\"" << px(x2) << "\" y2=\""
            << px(y2) << "\"/>\n";
    }
    out << "  </g>\n";

    out << "  <g class=\"arrows\" stroke=\"red\" stroke-width=\"0.6\">\n";
    for (NodeId i : delta.moved) {
        const auto [x1, y1] = to_px(before.positions()[i]);
        const auto [x2, y2] = to_px(after.positions()[i]);
        out << "    <line class=\"arrow\" data-node=\"" << i << "\" x1=\"" << px(x1) << "\" y1=\""
            << px(y1) << "\" x2=\"" << px(x2) << "\" y2=\"" << px(y2)
            << "\" marker-end=\"url(#arrowhead)\"/>\n";
    }
    out << "  </g>\n";

    out << "  <g class=\"nodes\">\n";
    for (NodeId i = 0; i < after.n(); ++i) {
        std::string classes;
        auto add = [&](const char* name) {
            if (!classes.empty()) classes += ' ';
            classes += name;
        };
        if (contains(delta.moved, i)) add("moved");
        if (contains(delta.gained_nodes, i)) add("gained");
        if (contains(delta.isolated_nodes, i)) add("isolated");
        const auto [cx, cy] = to_px(after.positions()[i]);
        out << "    <circle class=\"node\" data-node=\"" << i << "\" data-classes=\"" << classes
            << "\" cx=\"" << px(cx) << "\" cy=\"" << px(cy) << "\" r=\"" << px(options.node_radius_px)
            << "\" fill=\"" << fill_of(primary_class(delta, i)) << "\"/>\n";
    }
    out << "  </g>\n</svg>\n";
    return out.str();
}

void export_snapshot_svg(const GraphSnapshot& before, const GraphSnapshot& after,
                         const StepDelta& delta, const std::filesystem::path& path,
                         const SvgOptions& options) {
    if (before.n() != after.n()) throw UsageError("snapshot_svg: snapshots differ in size");
    write_text(path, snapshot_svg(before, after, delta, options));
}

}  // namespace gnmn
