#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "vantage/graph.hpp"

namespace vantage {

struct GridSpec {
    int rows = 0;
    int cols = 0;

    NodeId node_id(int row, int col) const {
        return static_cast<NodeId>(row * cols + col);
    }
    int row_of(NodeId v) const { return static_cast<int>(v) / cols; }
    int col_of(NodeId v) const { return static_cast<int>(v) % cols; }
    bool in_bounds(int row, int col) const {
        return row >= 0 && row < rows && col >= 0 && col < cols;
    }
    std::size_t node_count() const { return static_cast<std::size_t>(rows) * cols; }
};

// Axis-aligned ellipse in grid coordinates; a node lies inside when
// ((row-center_row)/semi_row)^2 + ((col-center_col)/semi_col)^2 <= 1.
struct Oval {
    double center_row = 0.0;
    double center_col = 0.0;
    double semi_row = 0.0;
    double semi_col = 0.0;
};

// Everything a trial needs to run on one world: the graph, who sees what,
// which edges a realization may block, and the endpoints.
struct MapBundle {
    std::string kind;  // "plateau-fixed" | "plateau-procedural" | "terrain"
    GridSpec grid;
    Graph graph;
    VisibilityMap vis;
    NodeId src = 0;
    NodeId dst = 0;
    // Each unit blocks atomically with the experiment's probability p:
    // singleton chokepoint edges on plateau maps, whole ovals on terrain.
    std::vector<std::vector<EdgeKey>> blockage_units;
    std::vector<EdgeKey> chokepoints;  // plateau maps; flat view of the units
    std::vector<std::vector<NodeId>> plateau_nodes;
    std::vector<Oval> ovals;  // terrain maps
    double default_block_prob = 0.5;
    std::uint64_t generator_seed = 0;
    std::string generator_params;
};

// The built-in plateau world: a 14x20 grid crossed by two walls of plateaus
// separated by one-node-wide slots, source in one corner, target in the
// opposite one. Plateau entry edges cost 3 both ways, every other edge costs
// 1. The chokepoint set is the highest-utility edges of the wall-crossing
// corridors (at most three per crossing), skipping any whose removal
// (jointly with those already chosen) would disconnect source from target.
// Plateau nodes see every edge inside and around their plateau; ground nodes
// see only incident edges.
MapBundle build_plateau_map();

struct ProceduralParams {
    int grid = 12;  // 12, 14 or 16
    int min_plateaus = 4;
    int max_plateaus = 5;
    double coverage_lo = 0.40;
    double coverage_hi = 0.45;
    int chokepoints_lo = 18;
    int chokepoints_hi = 21;
    int entries_lo = 2;
    int entries_hi = 3;
    double block_prob = 0.5;
    std::uint64_t seed = 0;
    int max_attempts = 500;
};

// Named configurations for the procedural generator.
ProceduralParams standard_preset(int grid, std::uint64_t seed);
ProceduralParams dense_preset(int grid, std::uint64_t seed);     // 21-24 chokepoints
ProceduralParams lowblock_preset(int grid, std::uint64_t seed);  // p = 0.4
ProceduralParams six_preset(int grid, std::uint64_t seed);       // 6 plateaus, needs grid >= 16
ProceduralParams preset_by_name(const std::string& name, int grid, std::uint64_t seed);

struct GeneratorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rejection-sampled plateau world: plateaus are placed and grown until the
// ground between them narrows to one-node corridors, each plateau keeps two
// or three entry edges, and the last few edges of every corridor (the end
// farther from the source) become chokepoints. A layout is rejected unless
// coverage and chokepoint counts land in the preset's bands and the map
// stays connected even with every chokepoint removed. Deterministic per
// seed; throws GeneratorError when no attempt satisfies the constraints.
MapBundle generate_procedural_plateau(const ProceduralParams& params);

struct Heightmap {
    GridSpec grid;
    std::vector<double> heights;  // row-major, normalized to [0, 10]

    double at(int row, int col) const { return heights[grid.node_id(row, col)]; }
};

// Plain-text grid: header "rows cols", then rows*cols space-separated
// heights in row-major order. Raw values are min-max normalized to [0, 10];
// a constant map normalizes to all zeros.
Heightmap parse_heightmap(const std::string& text);
Heightmap load_heightmap(const std::string& path);

// 4-connected grid whose directed cost from a to b is
//   1 + 2*(h(b)-h(a))*(h(b)-h(a)-0.5),
// clamped below at 1e-3 (the formula itself stays positive on [0,10]
// heights, the floor guards unnormalized data fed in from outside).
Graph build_terrain_graph(const Heightmap& hm);

enum class LosRule {
    // A ray node is visible while no intermediate node pokes above the
    // straight sightline between observer and target.
    InterpolatedSightline,
    // Simpler reading: the ray ends at the first node higher than the
    // observer.
    MaxHeightThreshold,
};

// Casts rays in the 8 compass directions from every node; an edge is
// visible when both endpoints are. Incident edges are always included.
VisibilityMap line_of_sight_visibility(const Heightmap& hm,
                                       LosRule rule = LosRule::InterpolatedSightline);

// Edges with both endpoints inside at least one oval, ascending and
// duplicate-free: the candidate blockage set for a terrain world.
std::vector<EdgeKey> place_oval_obstacles(const Graph& g, const GridSpec& grid,
                                          const std::vector<Oval>& ovals);
// Same edges grouped per oval (an oval blocks all-or-nothing).
std::vector<std::vector<EdgeKey>> oval_edge_groups(const Graph& g, const GridSpec& grid,
                                                   const std::vector<Oval>& ovals);

// Terrain world: line-of-sight visibility over the heightmap, source top
// right, target bottom left, ovals as atomic blockage units.
MapBundle build_terrain_map(const Heightmap& hm, const std::vector<Oval>& ovals,
                            LosRule rule = LosRule::InterpolatedSightline);

}  // namespace vantage
