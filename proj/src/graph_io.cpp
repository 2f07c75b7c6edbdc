#include "vantage/graph_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "json_util.hpp"

namespace vantage {

std::string format_double(double x) {
    char buf[64];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

namespace {

struct Line {
    int number = 0;
    std::vector<std::string> tokens;
};

// Splits into tokens per line, dropping blank lines and '#' comments.
std::vector<Line> tokenize(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream fields(raw);
        Line line{number, {}};
        std::string token;
        while (fields >> token) line.tokens.push_back(std::move(token));
        if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

std::uint64_t parse_unsigned(const std::string& token, int line, const char* what,
                             std::uint64_t max) {
    std::size_t pos = 0;
    unsigned long long value = 0;
    try {
        value = std::stoull(token, &pos);
    } catch (const std::exception&) {
        throw TextFormatError(line, std::string(what) + " is not a number: '" + token + "'");
    }
    if (pos != token.size() || token[0] == '-') {
        throw TextFormatError(line, std::string(what) + " is not a number: '" + token + "'");
    }
    if (value > max) {
        throw TextFormatError(line, std::string(what) + " out of range: '" + token + "'");
    }
    return value;
}

double parse_double(const std::string& token, int line, const char* what) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw TextFormatError(line, std::string(what) + " is not a number: '" + token + "'");
    }
    if (pos != token.size() || !std::isfinite(value)) {
        throw TextFormatError(line, std::string(what) + " is not finite: '" + token + "'");
    }
    return value;
}

int parse_int(const std::string& token, int line, const char* what) {
    std::size_t pos = 0;
    int value = 0;
    try {
        value = std::stoi(token, &pos);
    } catch (const std::exception&) {
        throw TextFormatError(line, std::string(what) + " is not a number: '" + token + "'");
    }
    if (pos != token.size()) {
        throw TextFormatError(line, std::string(what) + " is not a number: '" + token + "'");
    }
    return value;
}

using json = detail::ojson;
using detail::oval_from_json;
using detail::oval_to_json;

std::vector<EdgeKey> edge_keys_from_json(const json& arr, const Graph& g, const char* what) {
    std::vector<EdgeKey> keys;
    keys.reserve(arr.size());
    for (const auto& token : arr) {
        const EdgeKey k = edge_key_from_string(token.get<std::string>());
        if (!g.has_edge(edge_key_a(k), edge_key_b(k))) {
            throw std::runtime_error(std::string(what) + " references missing edge " +
                                     edge_key_to_string(k));
        }
        keys.push_back(k);
    }
    return keys;
}

json edge_keys_to_json(const std::vector<EdgeKey>& keys) {
    json arr = json::array();
    for (EdgeKey k : keys) arr.push_back(edge_key_to_string(k));
    return arr;
}

}  // namespace

std::string serialize_graph(const Graph& g) {
    std::string out = "nodes " + std::to_string(g.node_count()) + "\n";
    for (EdgeKey key : g.edge_keys()) {
        const NodeId a = edge_key_a(key);
        const NodeId b = edge_key_b(key);
        out += "edge " + std::to_string(a) + " " + std::to_string(b) + " " +
               format_double(g.cost(a, b)) + " " + format_double(g.cost(b, a)) + "\n";
    }
    if (g.has_coords()) {
        for (NodeId v = 0; v < g.node_count(); ++v) {
            const GridCoord& c = g.coord(v);
            out += "coord " + std::to_string(v) + " " + std::to_string(c.row) + " " +
                   std::to_string(c.col) + " " + format_double(c.height) + "\n";
        }
    }
    return out;
}

std::string serialize_world(const Graph& g, const VisibilityMap& vis) {
    std::string out = serialize_graph(g);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        out += "vis " + std::to_string(v);
        for (EdgeKey k : vis.visible(v)) out += " " + edge_key_to_string(k);
        out += "\n";
    }
    return out;
}

ParsedWorld parse_world(const std::string& text) {
    const std::vector<Line> lines = tokenize(text);
    if (lines.empty()) throw TextFormatError(1, "expected 'nodes N' header");

    const Line& header = lines.front();
    if (header.tokens[0] != "nodes" || header.tokens.size() != 2) {
        throw TextFormatError(header.number, "expected 'nodes N' header");
    }
    const auto node_count = static_cast<std::size_t>(parse_unsigned(
        header.tokens[1], header.number, "node count", std::numeric_limits<NodeId>::max()));

    std::vector<EdgeSpec> edges;
    std::unordered_set<EdgeKey> edge_seen;
    std::vector<GridCoord> coords(node_count);
    std::vector<bool> coord_seen(node_count, false);
    std::size_t coord_count = 0;
    std::vector<std::vector<EdgeKey>> vis(node_count);
    // (node, line) of each vis line, so membership errors can name the line.
    std::vector<std::pair<NodeId, int>> vis_lines;
    std::vector<bool> vis_seen(node_count, false);

    auto parse_node = [&](const std::string& token, int line) {
        const auto v = parse_unsigned(token, line, "node id", std::numeric_limits<NodeId>::max());
        if (v >= node_count) {
            throw TextFormatError(line, "node id " + token + " out of range");
        }
        return static_cast<NodeId>(v);
    };

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const Line& line = lines[i];
        const std::string& keyword = line.tokens[0];
        if (keyword == "edge") {
            if (line.tokens.size() != 5) {
                throw TextFormatError(line.number, "expected 'edge u v cost_uv cost_vu'");
            }
            EdgeSpec e;
            e.u = parse_node(line.tokens[1], line.number);
            e.v = parse_node(line.tokens[2], line.number);
            e.cost_uv = parse_double(line.tokens[3], line.number, "edge cost");
            e.cost_vu = parse_double(line.tokens[4], line.number, "edge cost");
            if (e.u == e.v) throw TextFormatError(line.number, "self-loop edge");
            if (e.cost_uv <= 0.0 || e.cost_vu <= 0.0) {
                throw TextFormatError(line.number, "edge costs must be positive");
            }
            if (!edge_seen.insert(make_edge_key(e.u, e.v)).second) {
                throw TextFormatError(line.number,
                                      "duplicate edge " + edge_key_to_string(make_edge_key(e.u, e.v)));
            }
            edges.push_back(e);
        } else if (keyword == "coord") {
            if (line.tokens.size() != 5) {
                throw TextFormatError(line.number, "expected 'coord v row col height'");
            }
            const NodeId v = parse_node(line.tokens[1], line.number);
            if (coord_seen[v]) {
                throw TextFormatError(line.number,
                                      "duplicate coord for node " + std::to_string(v));
            }
            coord_seen[v] = true;
            ++coord_count;
            coords[v].row = parse_int(line.tokens[2], line.number, "coord row");
            coords[v].col = parse_int(line.tokens[3], line.number, "coord col");
            coords[v].height = parse_double(line.tokens[4], line.number, "coord height");
        } else if (keyword == "vis") {
            if (line.tokens.size() < 2) {
                throw TextFormatError(line.number, "expected 'vis v e1 e2 ...'");
            }
            const NodeId v = parse_node(line.tokens[1], line.number);
            if (vis_seen[v]) {
                throw TextFormatError(line.number, "duplicate vis for node " + std::to_string(v));
            }
            vis_seen[v] = true;
            vis_lines.emplace_back(v, line.number);
            for (std::size_t t = 2; t < line.tokens.size(); ++t) {
                try {
                    vis[v].push_back(edge_key_from_string(line.tokens[t]));
                } catch (const std::invalid_argument& e) {
                    throw TextFormatError(line.number, e.what());
                }
            }
        } else if (keyword == "nodes") {
            throw TextFormatError(line.number, "duplicate 'nodes' header");
        } else {
            throw TextFormatError(line.number, "unknown keyword '" + keyword + "'");
        }
    }

    if (coord_count != 0 && coord_count != node_count) {
        throw TextFormatError(lines.back().number,
                              "coord lines cover " + std::to_string(coord_count) + " of " +
                                  std::to_string(node_count) + " nodes (need all or none)");
    }

    ParsedWorld world;
    world.graph = Graph(node_count, edges,
                        coord_count == node_count ? std::move(coords) : std::vector<GridCoord>{});

    const bool has_vis = !vis_lines.empty();
    for (const auto& [v, line] : vis_lines) {
        for (EdgeKey k : vis[v]) {
            if (!world.graph.has_edge(edge_key_a(k), edge_key_b(k))) {
                throw TextFormatError(line, "vis references missing edge " + edge_key_to_string(k));
            }
        }
    }
    if (has_vis) world.vis = VisibilityMap(world.graph, std::move(vis));
    return world;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path);
}

void save_map_bundle(const MapBundle& m, const std::string& dir) {
    std::filesystem::create_directories(dir);
    write_text_file(dir + "/world.txt", serialize_world(m.graph, m.vis));

    json manifest;
    manifest["kind"] = m.kind;
    manifest["grid"] = json{{"rows", m.grid.rows}, {"cols", m.grid.cols}};
    manifest["src"] = m.src;
    manifest["dst"] = m.dst;
    manifest["default_block_prob"] = m.default_block_prob;
    manifest["generator_seed"] = m.generator_seed;
    manifest["generator_params"] = m.generator_params;
    manifest["chokepoints"] = edge_keys_to_json(m.chokepoints);
    json units = json::array();
    for (const auto& unit : m.blockage_units) units.push_back(edge_keys_to_json(unit));
    manifest["blockage_units"] = units;
    manifest["plateau_nodes"] = m.plateau_nodes;
    json ovals = json::array();
    for (const Oval& o : m.ovals) ovals.push_back(oval_to_json(o));
    manifest["ovals"] = ovals;
    write_text_file(dir + "/manifest.json", manifest.dump(2) + "\n");
}

MapBundle load_map_bundle(const std::string& dir) {
    ParsedWorld world = parse_world(read_text_file(dir + "/world.txt"));
    if (!world.vis) {
        throw std::runtime_error(dir + "/world.txt has no visibility block");
    }

    json manifest;
    try {
        manifest = json::parse(read_text_file(dir + "/manifest.json"));
    } catch (const json::parse_error& e) {
        throw std::runtime_error(dir + "/manifest.json: " + e.what());
    }

    MapBundle m;
    m.graph = std::move(world.graph);
    m.vis = std::move(*world.vis);
    try {
        m.kind = manifest.at("kind").get<std::string>();
        m.grid.rows = manifest.at("grid").at("rows").get<int>();
        m.grid.cols = manifest.at("grid").at("cols").get<int>();
        m.src = manifest.at("src").get<NodeId>();
        m.dst = manifest.at("dst").get<NodeId>();
        m.default_block_prob = manifest.at("default_block_prob").get<double>();
        m.generator_seed = manifest.at("generator_seed").get<std::uint64_t>();
        m.generator_params = manifest.at("generator_params").get<std::string>();
        m.chokepoints = edge_keys_from_json(manifest.at("chokepoints"), m.graph, "chokepoints");
        for (const auto& unit : manifest.at("blockage_units")) {
            m.blockage_units.push_back(edge_keys_from_json(unit, m.graph, "blockage_units"));
        }
        m.plateau_nodes = manifest.at("plateau_nodes").get<std::vector<std::vector<NodeId>>>();
        for (const auto& o : manifest.at("ovals")) m.ovals.push_back(oval_from_json(o));
    } catch (const json::exception& e) {
        throw std::runtime_error(dir + "/manifest.json: " + e.what());
    }
    if (!m.graph.has_node(m.src) || !m.graph.has_node(m.dst)) {
        throw std::runtime_error(dir + "/manifest.json: src/dst outside the graph");
    }
    for (const auto& nodes : m.plateau_nodes) {
        for (NodeId v : nodes) {
            if (!m.graph.has_node(v)) {
                throw std::runtime_error(dir + "/manifest.json: plateau node " +
                                         std::to_string(v) + " outside the graph");
            }
        }
    }
    return m;
}

std::string describe_map(const MapBundle& m) {
    std::string out = m.kind + " " + std::to_string(m.grid.rows) + "x" +
                      std::to_string(m.grid.cols) + ": " + std::to_string(m.graph.node_count()) +
                      " nodes, " + std::to_string(m.graph.undirected_edge_count()) + " edges, " +
                      std::to_string(m.blockage_units.size()) + " blockage units";
    if (!m.chokepoints.empty()) {
        out += " (" + std::to_string(m.chokepoints.size()) + " chokepoint edges)";
    }
    if (!m.ovals.empty()) out += " (" + std::to_string(m.ovals.size()) + " ovals)";
    return out;
}

}  // namespace vantage
