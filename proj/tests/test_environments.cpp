#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "vantage/environments.hpp"
#include "vantage/rng.hpp"

using namespace vantage;
using testutil::builtin_map;
using testutil::capture_error;
using testutil::contains;
using testutil::unit_grid;

#ifndef TEST_DATA_DIR
#define TEST_DATA_DIR "data"
#endif

namespace {

// owner[v] = plateau index or -1, reconstructed from the bundle.
std::vector<int> owner_of(const MapBundle& m) {
    std::vector<int> owner(m.graph.node_count(), -1);
    for (std::size_t p = 0; p < m.plateau_nodes.size(); ++p) {
        for (NodeId v : m.plateau_nodes[p]) owner[v] = static_cast<int>(p);
    }
    return owner;
}

std::vector<EdgeKey> sorted_incident(const Graph& g, NodeId v) {
    std::vector<EdgeKey> keys;
    for (const Neighbor& n : g.neighbors(v)) keys.push_back(make_edge_key(v, n.to));
    std::sort(keys.begin(), keys.end());
    return keys;
}

// Structural checks shared by the fixed and the procedural plateau worlds.
void check_plateau_invariants(const MapBundle& m, int entries_lo, int entries_hi) {
    const std::vector<int> owner = owner_of(m);

    // Entry edges cost 3 both ways and join ground to exactly one plateau;
    // every other edge costs 1 and never crosses a plateau boundary.
    std::vector<int> entries_per_plateau(m.plateau_nodes.size(), 0);
    for (const EdgeKey e : m.graph.edge_keys()) {
        const NodeId a = edge_key_a(e);
        const NodeId b = edge_key_b(e);
        const double cab = m.graph.cost(a, b);
        const double cba = m.graph.cost(b, a);
        CHECK(cab == cba);
        if (owner[a] != owner[b]) {
            CHECK(cab == 3.0);
            CHECK((owner[a] == -1 || owner[b] == -1));
            ++entries_per_plateau[static_cast<std::size_t>(std::max(owner[a], owner[b]))];
        } else {
            CHECK(cab == 1.0);
        }
    }
    for (const int count : entries_per_plateau) {
        CHECK(count >= entries_lo);
        CHECK(count <= entries_hi);
    }

    // Distinct plateaus keep a one-node ground gap.
    for (int r = 0; r < m.grid.rows; ++r) {
        for (int c = 0; c < m.grid.cols; ++c) {
            const int o = owner[m.grid.node_id(r, c)];
            if (o < 0) continue;
            if (r + 1 < m.grid.rows) {
                const int below = owner[m.grid.node_id(r + 1, c)];
                CHECK((below == -1 || below == o));
            }
            if (c + 1 < m.grid.cols) {
                const int right = owner[m.grid.node_id(r, c + 1)];
                CHECK((right == -1 || right == o));
            }
        }
    }

    // Chokepoints are real edges, sorted, mirrored by singleton units, and
    // jointly removable without cutting off the target.
    CHECK(std::is_sorted(m.chokepoints.begin(), m.chokepoints.end()));
    REQUIRE(m.blockage_units.size() == m.chokepoints.size());
    for (std::size_t i = 0; i < m.chokepoints.size(); ++i) {
        const EdgeKey e = m.chokepoints[i];
        CHECK(m.graph.has_edge(edge_key_a(e), edge_key_b(e)));
        CHECK(m.blockage_units[i] == std::vector<EdgeKey>{e});
    }
    const EdgeKeySet all_blocked(m.chokepoints.begin(), m.chokepoints.end());
    CHECK(shortest_path(m.graph, m.src, m.dst, all_blocked).has_value());

    // Ground nodes see only their incident edges; all nodes of one plateau
    // share one visible set that covers every edge touching the plateau.
    for (std::size_t p = 0; p < m.plateau_nodes.size(); ++p) {
        REQUIRE_FALSE(m.plateau_nodes[p].empty());
        const std::vector<EdgeKey>& shared = m.vis.visible(m.plateau_nodes[p].front());
        for (NodeId v : m.plateau_nodes[p]) CHECK(m.vis.visible(v) == shared);
        for (const EdgeKey e : m.graph.edge_keys()) {
            if (owner[edge_key_a(e)] == static_cast<int>(p) ||
                owner[edge_key_b(e)] == static_cast<int>(p)) {
                CHECK(std::binary_search(shared.begin(), shared.end(), e));
            }
        }
    }
    for (NodeId v = 0; v < m.graph.node_count(); ++v) {
        if (owner[v] == -1) CHECK(m.vis.visible(v) == sorted_incident(m.graph, v));
    }
}

Heightmap raw_heightmap(int rows, int cols, std::vector<double> heights) {
    Heightmap hm;
    hm.grid = GridSpec{rows, cols};
    hm.heights = std::move(heights);
    return hm;
}

std::set<EdgeKey> visible_set(const VisibilityMap& vis, NodeId v) {
    const auto& list = vis.visible(v);
    return {list.begin(), list.end()};
}

}  // namespace

TEST_CASE("the built-in plateau world keeps its frozen shape") {
    const MapBundle& m = builtin_map();
    CHECK(m.kind == "plateau-fixed");
    CHECK(m.grid.rows == 14);
    CHECK(m.grid.cols == 20);
    CHECK(m.graph.node_count() == 280);
    CHECK(m.graph.undirected_edge_count() == 408);
    CHECK(m.src == 0);
    CHECK(m.dst == 279);
    CHECK(m.default_block_prob == 0.5);
    CHECK(m.generator_params == "builtin 14x20, 6 plateaus, 18 chokepoints");
    CHECK(m.ovals.empty());

    REQUIRE(m.plateau_nodes.size() == 6);
    const std::vector<std::size_t> sizes = {
        m.plateau_nodes[0].size(), m.plateau_nodes[1].size(), m.plateau_nodes[2].size(),
        m.plateau_nodes[3].size(), m.plateau_nodes[4].size(), m.plateau_nodes[5].size()};
    CHECK(sizes == std::vector<std::size_t>{25, 30, 25, 18, 30, 48});

    CHECK(m.chokepoints.size() == 18);

    // Twelve entry edges, two per plateau.
    int entry_edges = 0;
    for (const EdgeKey e : m.graph.edge_keys()) {
        if (m.graph.cost(edge_key_a(e), edge_key_b(e)) == 3.0) ++entry_edges;
    }
    CHECK(entry_edges == 12);

    const auto sp = shortest_path(m.graph, m.src, m.dst);
    REQUIRE(sp.has_value());
    CHECK(sp->cost == 32.0);

    check_plateau_invariants(m, 2, 2);

    // Plateau coords carry height 1, ground coords height 0.
    REQUIRE(m.graph.has_coords());
    const std::vector<int> owner = owner_of(m);
    for (NodeId v = 0; v < m.graph.node_count(); ++v) {
        CHECK(m.graph.coord(v).height == (owner[v] >= 0 ? 1.0 : 0.0));
        CHECK(m.grid.node_id(m.graph.coord(v).row, m.graph.coord(v).col) == v);
    }
}

TEST_CASE("building the fixed world twice gives identical results") {
    const MapBundle a = build_plateau_map();
    const MapBundle& b = builtin_map();
    CHECK(a.graph.edge_keys() == b.graph.edge_keys());
    CHECK(a.chokepoints == b.chokepoints);
    CHECK(a.plateau_nodes == b.plateau_nodes);
    for (NodeId v = 0; v < a.graph.node_count(); ++v) {
        CHECK(a.vis.visible(v) == b.vis.visible(v));
    }
}

TEST_CASE("procedural worlds land inside their preset bands") {
    const ProceduralParams params = standard_preset(12, 7);
    const MapBundle m = generate_procedural_plateau(params);

    CHECK(m.kind == "plateau-procedural");
    CHECK(m.grid.rows == 12);
    CHECK(m.grid.cols == 12);
    CHECK(m.src == 0);
    CHECK(m.dst == 143);
    CHECK(m.default_block_prob == 0.5);
    CHECK(m.generator_seed == 7);
    CHECK(contains(m.generator_params, "procedural grid=12"));

    const std::size_t plateaus = m.plateau_nodes.size();
    CHECK(plateaus >= 4);
    CHECK(plateaus <= 5);

    std::size_t covered = 0;
    for (const auto& nodes : m.plateau_nodes) covered += nodes.size();
    const double coverage = static_cast<double>(covered) / 144.0;
    CHECK(coverage >= 0.40);
    CHECK(coverage <= 0.45);

    CHECK(m.chokepoints.size() >= 18);
    CHECK(m.chokepoints.size() <= 21);

    check_plateau_invariants(m, 2, 3);

    // No unreachable pockets.
    for (NodeId v = 0; v < m.graph.node_count(); ++v) {
        CHECK(shortest_path(m.graph, m.src, v).has_value());
    }
}

TEST_CASE("the procedural generator is a pure function of its parameters") {
    const ProceduralParams params = standard_preset(12, 21);
    const MapBundle a = generate_procedural_plateau(params);
    const MapBundle b = generate_procedural_plateau(params);
    CHECK(a.graph.edge_keys() == b.graph.edge_keys());
    CHECK(a.chokepoints == b.chokepoints);
    CHECK(a.plateau_nodes == b.plateau_nodes);
    CHECK(a.generator_params == b.generator_params);
    for (NodeId v = 0; v < a.graph.node_count(); ++v) {
        CHECK(a.vis.visible(v) == b.vis.visible(v));
    }
    for (const EdgeKey e : a.graph.edge_keys()) {
        CHECK(a.graph.cost(edge_key_a(e), edge_key_b(e)) ==
              b.graph.cost(edge_key_a(e), edge_key_b(e)));
    }
}

TEST_CASE("presets adjust the bands they claim to") {
    const MapBundle dense = generate_procedural_plateau(dense_preset(12, 3));
    CHECK(dense.chokepoints.size() >= 21);
    CHECK(dense.chokepoints.size() <= 24);

    const MapBundle lowblock = generate_procedural_plateau(lowblock_preset(12, 5));
    CHECK(lowblock.default_block_prob == 0.4);

    const MapBundle six = generate_procedural_plateau(six_preset(16, 1));
    CHECK(six.plateau_nodes.size() == 6);
    CHECK(six.grid.rows == 16);

    CHECK(contains(capture_error([] { six_preset(12, 0); }), "at least 16"));
    CHECK_THROWS_AS(six_preset(12, 0), GeneratorError);

    const ProceduralParams named = preset_by_name("dense", 14, 9);
    CHECK(named.chokepoints_lo == 21);
    CHECK(named.chokepoints_hi == 24);
    CHECK(named.grid == 14);
    CHECK(named.seed == 9);
    CHECK_THROWS_AS(preset_by_name("mystery", 12, 0), std::invalid_argument);
}

TEST_CASE("impossible generator constraints fail with a rejection report") {
    ProceduralParams params = standard_preset(8, 2);
    params.coverage_lo = 0.90;
    params.coverage_hi = 0.95;
    params.max_attempts = 3;
    CHECK_THROWS_AS(generate_procedural_plateau(params), GeneratorError);
    const std::string msg = capture_error([&] { generate_procedural_plateau(params); });
    CHECK(contains(msg, "no valid layout after 3 attempts"));
    CHECK(contains(msg, "rejections"));

    ProceduralParams tiny = standard_preset(7, 0);
    CHECK(contains(capture_error([&] { generate_procedural_plateau(tiny); }), "grid too small"));

    ProceduralParams bad = standard_preset(12, 0);
    bad.min_plateaus = 3;
    bad.max_plateaus = 2;
    CHECK(contains(capture_error([&] { generate_procedural_plateau(bad); }),
                   "invalid plateau count range"));
}

TEST_CASE("heightmaps normalize to the zero-to-ten band") {
    const Heightmap ramp = parse_heightmap("1 3\n100 300 200\n");
    CHECK(ramp.grid.rows == 1);
    CHECK(ramp.grid.cols == 3);
    CHECK(ramp.heights == std::vector<double>{0.0, 10.0, 5.0});
    CHECK(ramp.at(0, 1) == 10.0);

    const Heightmap flat = parse_heightmap("2 2\n5 5\n5 5\n");
    CHECK(flat.heights == std::vector<double>{0.0, 0.0, 0.0, 0.0});

    // Negative raw values are fine; only the spread matters.
    const Heightmap neg = parse_heightmap("1 2\n-4 -2\n");
    CHECK(neg.heights == std::vector<double>{0.0, 10.0});
}

TEST_CASE("heightmap parsing reports the offending line and column") {
    CHECK(capture_error([] { parse_heightmap(""); }) ==
          "heightmap parse error at line 1, column 1: missing 'rows cols' header");
    CHECK(capture_error([] { parse_heightmap("3\n"); }) ==
          "heightmap parse error at line 1, column 1: missing 'rows cols' header");
    CHECK(capture_error([] { parse_heightmap("x 3\n1 2 3\n"); }) ==
          "heightmap parse error at line 1, column 1: expected positive integer row count, got "
          "'x'");
    CHECK(capture_error([] { parse_heightmap("2 -2\n1 2 3 4\n"); }) ==
          "heightmap parse error at line 1, column 3: expected positive integer column count, "
          "got '-2'");
    CHECK(capture_error([] { parse_heightmap("2 2\n1 2 3\n"); }) ==
          "heightmap parse error at line 2, column 5: expected 4 height values, got 3");
    CHECK(capture_error([] { parse_heightmap("1 2\n1 2 3\n"); }) ==
          "heightmap parse error at line 2, column 5: expected 2 height values, got 3");
    CHECK(capture_error([] { parse_heightmap("1 2\n1 abc\n"); }) ==
          "heightmap parse error at line 2, column 3: expected numeric height, got 'abc'");
    CHECK(capture_error([] { parse_heightmap("1 2\n1 inf\n"); }) ==
          "heightmap parse error at line 2, column 3: expected numeric height, got 'inf'");
}

TEST_CASE("heightmap files load with path-qualified errors") {
    CHECK(capture_error([] { load_heightmap("/nonexistent/h.txt"); }) ==
          "cannot open heightmap file: /nonexistent/h.txt");

    const std::filesystem::path bad =
        std::filesystem::temp_directory_path() / "vantage_bad_heightmap.txt";
    {
        std::ofstream out(bad);
        out << "1 2\n1 oops\n";
    }
    const std::string msg = capture_error([&] { load_heightmap(bad.string()); });
    CHECK(contains(msg, bad.string() + ": heightmap parse error"));
    std::filesystem::remove(bad);

    const Heightmap sample = load_heightmap(std::string(TEST_DATA_DIR) +
                                            "/heightmaps/sample64.txt");
    CHECK(sample.grid.rows == 64);
    CHECK(sample.grid.cols == 64);
    const auto [mn, mx] =
        std::minmax_element(sample.heights.begin(), sample.heights.end());
    CHECK(*mn == 0.0);
    CHECK(*mx == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(*mx <= 10.0 + 1e-9);
}

TEST_CASE("terrain step costs follow the height-difference curve exactly") {
    const auto cost_for = [](double from, double to) {
        const Heightmap hm = raw_heightmap(1, 2, {from, to});
        return build_terrain_graph(hm).cost(0, 1);
    };
    CHECK(cost_for(3.0, 3.0) == 1.0);    // flat
    CHECK(cost_for(0.0, 0.5) == 1.0);    // the free half-step up
    CHECK(cost_for(1.0, 0.0) == 4.0);    // unit drop
    CHECK(cost_for(0.0, 1.0) == 2.0);    // unit climb
    CHECK(cost_for(0.0, 0.25) == 0.875);  // cheapest possible step

    Rng rng(0xD1FF);
    for (int i = 0; i < 50; ++i) {
        const double a = rng.next_double() * 10.0;
        const double b = rng.next_double() * 10.0;
        const double d = b - a;
        const double expected = std::max(1.0 + 2.0 * d * (d - 0.5), 1e-3);
        CHECK(cost_for(a, b) == expected);
    }
}

TEST_CASE("terrain graphs are 4-connected grids that carry their heights") {
    const Heightmap hm = raw_heightmap(3, 4, {0, 1, 2, 3,  //
                                              4, 5, 6, 7,  //
                                              8, 9, 9.5, 10});
    const Graph g = build_terrain_graph(hm);
    CHECK(g.node_count() == 12);
    CHECK(g.undirected_edge_count() == 3 * 3 + 4 * 2);
    REQUIRE(g.has_coords());
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 4; ++c) {
            const GridCoord& coord = g.coord(hm.grid.node_id(r, c));
            CHECK(coord.row == r);
            CHECK(coord.col == c);
            CHECK(coord.height == hm.at(r, c));
        }
    }
    // The curve's global minimum is 0.875 at a +0.25 step.
    for (const EdgeKey e : g.edge_keys()) {
        CHECK(g.cost(edge_key_a(e), edge_key_b(e)) >= 0.875);
        CHECK(g.cost(edge_key_b(e), edge_key_a(e)) >= 0.875);
    }
}

TEST_CASE("on flat ground every node sees every edge along its rays") {
    const Heightmap hm = raw_heightmap(3, 3, std::vector<double>(9, 0.0));
    for (const LosRule rule : {LosRule::InterpolatedSightline, LosRule::MaxHeightThreshold}) {
        const VisibilityMap vis = line_of_sight_visibility(hm, rule);
        // Center: all 8 rays reach the border, every node is visible.
        CHECK(vis.visible(4).size() == 12);
        // Corner: rays cover {0,1,2,3,4,6,8}; nodes 5 and 7 stay unseen.
        const std::set<EdgeKey> corner = visible_set(vis, 0);
        const std::set<EdgeKey> expected = {make_edge_key(0, 1), make_edge_key(0, 3),
                                            make_edge_key(1, 2), make_edge_key(1, 4),
                                            make_edge_key(3, 4), make_edge_key(3, 6)};
        CHECK(corner == expected);
    }
}

TEST_CASE("a summit sees everything under both sightline rules") {
    Heightmap hm = raw_heightmap(3, 3, std::vector<double>(9, 0.0));
    hm.heights[4] = 9.0;
    for (const LosRule rule : {LosRule::InterpolatedSightline, LosRule::MaxHeightThreshold}) {
        CHECK(line_of_sight_visibility(hm, rule).visible(4).size() == 12);
    }
}

TEST_CASE("a ridge hides the valley beyond it") {
    const Heightmap hm = raw_heightmap(1, 3, {0.0, 5.0, 0.0});
    for (const LosRule rule : {LosRule::InterpolatedSightline, LosRule::MaxHeightThreshold}) {
        const VisibilityMap vis = line_of_sight_visibility(hm, rule);
        CHECK(visible_set(vis, 0) == std::set<EdgeKey>{make_edge_key(0, 1)});
        // The ridge itself sees both slopes.
        CHECK(vis.visible(1).size() == 2);
    }
}

TEST_CASE("the two sightline rules disagree on a rising staircase") {
    const Heightmap hm = raw_heightmap(1, 3, {4.0, 6.0, 10.0});
    // Interpolated: the far node out-climbs the sightline over the middle one.
    CHECK(visible_set(line_of_sight_visibility(hm, LosRule::InterpolatedSightline), 0) ==
          std::set<EdgeKey>{make_edge_key(0, 1), make_edge_key(1, 2)});
    // Threshold: the first higher node ends the ray.
    CHECK(visible_set(line_of_sight_visibility(hm, LosRule::MaxHeightThreshold), 0) ==
          std::set<EdgeKey>{make_edge_key(0, 1)});
}

TEST_CASE("line of sight always includes incident edges") {
    Rng rng(0x9E1);
    for (int i = 0; i < 5; ++i) {
        const int rows = 2 + static_cast<int>(rng.next_below(4));
        const int cols = 2 + static_cast<int>(rng.next_below(4));
        std::vector<double> heights(static_cast<std::size_t>(rows) * cols);
        for (double& h : heights) h = 0.5 * static_cast<double>(rng.next_below(41));
        const Heightmap hm = raw_heightmap(rows, cols, std::move(heights));
        const Graph g = build_terrain_graph(hm);
        for (const LosRule rule :
             {LosRule::InterpolatedSightline, LosRule::MaxHeightThreshold}) {
            const VisibilityMap vis = line_of_sight_visibility(hm, rule);
            for (NodeId v = 0; v < g.node_count(); ++v) {
                const auto& seen = vis.visible(v);
                CHECK(std::is_sorted(seen.begin(), seen.end()));
                for (const EdgeKey e : sorted_incident(g, v)) {
                    CHECK(std::binary_search(seen.begin(), seen.end(), e));
                }
            }
        }
    }
}

TEST_CASE("raising your own vantage never shrinks what you see") {
    // Half-integer heights keep every slope comparison far from rounding
    // error, so the monotonicity holds exactly in floating point too.
    Rng rng(0xC11F);
    for (int i = 0; i < 12; ++i) {
        const int rows = 2 + static_cast<int>(rng.next_below(7));
        const int cols = 2 + static_cast<int>(rng.next_below(7));
        std::vector<double> heights(static_cast<std::size_t>(rows) * cols);
        for (double& h : heights) {
            h = 0.5 * (static_cast<double>(rng.next_below(41)) - 20.0);
        }
        const Heightmap base = raw_heightmap(rows, cols, heights);
        const NodeId v = static_cast<NodeId>(rng.next_below(base.grid.node_count()));
        Heightmap raised = base;
        raised.heights[v] += 0.5 * static_cast<double>(1 + rng.next_below(10));

        for (const LosRule rule :
             {LosRule::InterpolatedSightline, LosRule::MaxHeightThreshold}) {
            const std::set<EdgeKey> before =
                visible_set(line_of_sight_visibility(base, rule), v);
            const std::set<EdgeKey> after =
                visible_set(line_of_sight_visibility(raised, rule), v);
            CHECK(std::includes(after.begin(), after.end(), before.begin(), before.end()));
        }
    }
}

TEST_CASE("ovals capture exactly the edges with both endpoints inside") {
    const Graph g = unit_grid(3, 3);
    const GridSpec grid{3, 3};

    // Degenerate oval: one node inside, so no edge qualifies.
    CHECK(place_oval_obstacles(g, grid, {Oval{1, 1, 0, 0}}).empty());

    const Oval a{0.5, 0.5, 0.75, 0.75};  // covers the top-left 2x2 block
    const std::vector<EdgeKey> a_edges = {make_edge_key(0, 1), make_edge_key(0, 3),
                                          make_edge_key(1, 4), make_edge_key(3, 4)};
    CHECK(place_oval_obstacles(g, grid, {a}) == a_edges);

    // Overlapping second oval: union is sorted and duplicate-free.
    const Oval b{0.5, 1.5, 0.75, 0.75};  // covers the top-right 2x2 block
    const std::vector<EdgeKey> both = place_oval_obstacles(g, grid, {a, b});
    CHECK(both.size() == 7);  // 4 + 4 with edge 1-4 shared
    CHECK(std::is_sorted(both.begin(), both.end()));
    CHECK(std::adjacent_find(both.begin(), both.end()) == both.end());

    const auto groups = oval_edge_groups(g, grid, {a, b});
    REQUIRE(groups.size() == 2);
    CHECK(groups[0] == a_edges);
    CHECK(groups[1] == std::vector<EdgeKey>{make_edge_key(1, 2), make_edge_key(1, 4),
                                            make_edge_key(2, 5), make_edge_key(4, 5)});
}

TEST_CASE("terrain bundles wire the corners, ovals, and sight rule together") {
    const Heightmap hm = parse_heightmap("3 3\n1 1 1 1 1 1 1 1 1\n");
    const std::vector<Oval> ovals = {Oval{0.5, 0.5, 0.75, 0.75}};
    const MapBundle m = build_terrain_map(hm, ovals);

    CHECK(m.kind == "terrain");
    CHECK(m.src == 2);  // top right
    CHECK(m.dst == 6);  // bottom left
    CHECK(m.default_block_prob == 0.5);
    CHECK(contains(m.generator_params, "terrain 3x3"));
    CHECK(m.plateau_nodes.empty());
    CHECK(m.chokepoints.empty());
    REQUIRE(m.ovals.size() == 1);
    CHECK(m.ovals[0].center_row == 0.5);
    CHECK(m.ovals[0].semi_col == 0.75);
    REQUIRE(m.blockage_units.size() == 1);
    CHECK(m.blockage_units[0].size() == 4);

    // The bundle's visibility is the LOS map for the requested rule.
    const Heightmap stairs = parse_heightmap("1 3\n4 6 10\n");  // normalizes, still rising
    const MapBundle interp = build_terrain_map(stairs, {}, LosRule::InterpolatedSightline);
    const MapBundle thresh = build_terrain_map(stairs, {}, LosRule::MaxHeightThreshold);
    CHECK(interp.vis.visible(0).size() == 2);
    CHECK(thresh.vis.visible(0).size() == 1);
}

TEST_CASE("grid coordinates round-trip through node ids") {
    const GridSpec grid{5, 7};
    CHECK(grid.node_count() == 35);
    CHECK(grid.node_id(0, 0) == 0);
    CHECK(grid.node_id(4, 6) == 34);
    CHECK(grid.row_of(grid.node_id(3, 2)) == 3);
    CHECK(grid.col_of(grid.node_id(3, 2)) == 2);
    CHECK(grid.in_bounds(0, 6));
    CHECK_FALSE(grid.in_bounds(0, 7));
    CHECK_FALSE(grid.in_bounds(-1, 0));
    CHECK_FALSE(grid.in_bounds(5, 0));
}
