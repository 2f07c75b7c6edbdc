#include "vantage/render.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

namespace vantage {
namespace {

constexpr double kMargin = 16.0;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", x);
    return buf;
}

struct Canvas {
    const MapBundle& m;
    double cell;
    std::string body;

    double x(int col) const { return kMargin + (col + 0.5) * cell; }
    double y(int row) const { return kMargin + (m.grid.rows - row - 0.5) * cell; }
    double node_x(NodeId v) const { return x(m.grid.col_of(v)); }
    double node_y(NodeId v) const { return y(m.grid.row_of(v)); }
    double width() const { return m.grid.cols * cell + 2 * kMargin; }
    double height() const { return m.grid.rows * cell + 2 * kMargin; }

    void line(double x1, double y1, double x2, double y2, const std::string& style) {
        body += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
                "\" y2=\"" + num(y2) + "\" " + style + "/>\n";
    }

    void edge_line(EdgeKey k, const std::string& style) {
        const NodeId a = edge_key_a(k);
        const NodeId b = edge_key_b(k);
        line(node_x(a), node_y(a), node_x(b), node_y(b), style);
    }

    void polyline(const std::vector<NodeId>& nodes, const std::string& style) {
        if (nodes.size() < 2) return;
        body += "<polyline points=\"";
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (i) body += " ";
            body += num(node_x(nodes[i])) + "," + num(node_y(nodes[i]));
        }
        body += "\" fill=\"none\" " + style + "/>\n";
    }

    void circle(NodeId v, double r, const std::string& style) {
        body += "<circle cx=\"" + num(node_x(v)) + "\" cy=\"" + num(node_y(v)) + "\" r=\"" +
                num(r) + "\" " + style + "/>\n";
    }
};

// Grayscale for terrain heights in [0, 10]: high ground is dark.
std::string height_fill(double h) {
    const int level = 232 - static_cast<int>(std::clamp(h, 0.0, 10.0) / 10.0 * 150.0);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "rgb(%d,%d,%d)", level, level, level);
    return buf;
}

void draw_cells(Canvas& c) {
    const MapBundle& m = c.m;
    std::vector<bool> plateau(m.grid.node_count(), false);
    for (const auto& nodes : m.plateau_nodes) {
        for (NodeId v : nodes) plateau[v] = true;
    }
    const bool terrain = m.kind == "terrain" && m.graph.has_coords();
    for (int r = 0; r < m.grid.rows; ++r) {
        for (int col = 0; col < m.grid.cols; ++col) {
            const NodeId v = m.grid.node_id(r, col);
            std::string fill = "#ffffff";
            if (terrain) {
                fill = height_fill(m.graph.coord(v).height);
            } else if (plateau[v]) {
                fill = "#d9c9a3";
            }
            c.body += "<rect x=\"" + num(kMargin + col * c.cell) + "\" y=\"" +
                      num(kMargin + (m.grid.rows - r - 1) * c.cell) + "\" width=\"" + num(c.cell) +
                      "\" height=\"" + num(c.cell) + "\" fill=\"" + fill +
                      "\" stroke=\"#e4e4e4\" stroke-width=\"0.5\"/>\n";
        }
    }
}

void draw_utility(Canvas& c, const UtilityMap& utility) {
    double max_value = 0.0;
    for (const auto& [key, value] : utility.values()) max_value = std::max(max_value, value);
    if (max_value <= 0.0) return;
    // values() iterates a hash map; sort for byte determinism.
    std::vector<std::pair<EdgeKey, double>> entries(utility.values().begin(),
                                                    utility.values().end());
    std::sort(entries.begin(), entries.end());
    for (const auto& [key, value] : entries) {
        if (value <= 0.0) continue;
        const double w = 1.0 + 7.0 * (value / max_value);
        c.edge_line(key, "stroke=\"#e8923c\" stroke-opacity=\"0.55\" stroke-width=\"" + num(w) +
                             "\"");
    }
}

void draw_static_layers(Canvas& c, const RenderOptions& opts) {
    const MapBundle& m = c.m;
    draw_cells(c);
    if (opts.utility) draw_utility(c, *opts.utility);
    for (EdgeKey k : m.chokepoints) {
        c.edge_line(k, "stroke=\"#3c78d8\" stroke-width=\"2.5\" stroke-dasharray=\"3 2\"");
    }
    for (const Oval& o : m.ovals) {
        c.body += "<ellipse cx=\"" + num(c.x(0) + o.center_col * c.cell) + "\" cy=\"" +
                  num(c.y(0) - o.center_row * c.cell) + "\" rx=\"" + num(o.semi_col * c.cell) +
                  "\" ry=\"" + num(o.semi_row * c.cell) +
                  "\" fill=\"none\" stroke=\"#9351b8\" stroke-width=\"2\"/>\n";
    }
}

void draw_endpoints(Canvas& c) {
    c.circle(c.m.src, c.cell * 0.32, "fill=\"#2f9e44\" stroke=\"#1b5e2c\" stroke-width=\"1.5\"");
    c.circle(c.m.dst, c.cell * 0.32, "fill=\"#e03131\" stroke=\"#7c1a1a\" stroke-width=\"1.5\"");
}

std::string finish(Canvas& c) {
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(c.width()) +
                      "\" height=\"" + num(c.height()) + "\" viewBox=\"0 0 " + num(c.width()) +
                      " " + num(c.height()) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#fafafa\"/>\n";
    out += c.body;
    out += "</svg>\n";
    return out;
}

}  // namespace

std::string render_map_svg(const MapBundle& m, const RenderOptions& opts) {
    Canvas c{m, opts.cell > 0 ? opts.cell : 28.0, {}};
    draw_static_layers(c, opts);
    draw_endpoints(c);
    return finish(c);
}

std::string render_trial_svg(const MapBundle& m, const TrialResult& trial,
                             const RenderOptions& opts) {
    Canvas c{m, opts.cell > 0 ? opts.cell : 28.0, {}};
    draw_static_layers(c, opts);

    // Every blockage the agent discovered, in discovery order (set to dedupe).
    std::set<EdgeKey> discovered;
    for (const StepLog& step : trial.steps) {
        discovered.insert(step.newly_blocked.begin(), step.newly_blocked.end());
    }
    for (EdgeKey k : discovered) {
        c.edge_line(k, "stroke=\"#c92a2a\" stroke-width=\"3\"");
        const double mx = (c.node_x(edge_key_a(k)) + c.node_x(edge_key_b(k))) / 2.0;
        const double my = (c.node_y(edge_key_a(k)) + c.node_y(edge_key_b(k))) / 2.0;
        const double t = c.cell * 0.14;
        c.line(mx - t, my - t, mx + t, my + t, "stroke=\"#c92a2a\" stroke-width=\"2\"");
        c.line(mx - t, my + t, mx + t, my - t, "stroke=\"#c92a2a\" stroke-width=\"2\"");
    }

    c.polyline(trial.trajectory, "stroke=\"#212529\" stroke-width=\"3\"");
    c.polyline(trial.initial_plan,
               "stroke=\"#1971c2\" stroke-width=\"2\" stroke-dasharray=\"6 4\"");
    draw_endpoints(c);
    return finish(c);
}

}  // namespace vantage
