#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "vantage/environments.hpp"
#include "vantage/graph.hpp"

namespace vantage {

// Malformed world text; `line` is 1-based into the parsed string.
struct TextFormatError : std::runtime_error {
    int line;

    TextFormatError(int line_, const std::string& message)
        : std::runtime_error("line " + std::to_string(line_) + ": " + message), line(line_) {}
};

// Shortest decimal string that parses back to exactly `x`; used everywhere
// a number must survive a text round trip (world files, CSVs).
std::string format_double(double x);

// Line-oriented world text (full grammar in docs/formats.md):
//
//   nodes N
//   edge u v cost_uv cost_vu     one per undirected edge, ascending key order
//   coord v row col height       optional block: either every node or none
//   vis v a-b a-b ...            optional block: one line per node, sorted
//
// '#' starts a comment; blank lines are ignored. Numbers print with enough
// digits that parse(serialize(x)) reproduces x bit for bit.
std::string serialize_graph(const Graph& g);
std::string serialize_world(const Graph& g, const VisibilityMap& vis);

struct ParsedWorld {
    Graph graph;
    std::optional<VisibilityMap> vis;  // present when the text had vis lines
};

ParsedWorld parse_world(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// A bundle directory holds world.txt (graph + coords + visibility) and
// manifest.json (kind, grid, endpoints, blockage units, ovals, generator
// provenance). load(save(m)) reproduces every field of m; saving twice
// produces byte-identical files.
void save_map_bundle(const MapBundle& m, const std::string& dir);
MapBundle load_map_bundle(const std::string& dir);

// One-line summary: kind, grid, node/edge counts, blockage structure.
std::string describe_map(const MapBundle& m);

}  // namespace vantage
