#include <doctest.h>

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "oracles.hpp"
#include "vantage/reward.hpp"
#include "vantage/rng.hpp"
#include "vantage/sampler.hpp"

using namespace vantage;
using testutil::random_quarter_graph;
using testutil::unit_grid;

namespace {

// Hand-built two-level tree: root [0,1,2] plus one depth-1 child [0,1,3],
// with the default weighting parameters (branching 4, depth 4).
PathTree two_level_tree() {
    PathTree tree;
    tree.params.branching = 4;
    tree.params.depth = 4;
    PathTreeNode child;
    child.path = Path{{0, 1, 3}};
    child.depth = 1;
    PathTreeNode root;
    root.path = Path{{0, 1, 2}};
    root.depth = 0;
    root.children.push_back(child);
    tree.root.push_back(root);
    return tree;
}

double observation_part(const Path& p, const Graph& g, const VisibilityMap& vis,
                        const UtilityMap& u, const ObservedSet& obs) {
    return path_reward(p, 1.0, g, vis, u, obs) + path_cost(g, p);
}

}  // namespace

TEST_CASE("a root-only tree weights each of its edges at one over depth-plus-one") {
    // Single forced route, so the tree is just the root.
    const Graph g(4, {{0, 1, 1.0, 1.0}, {1, 2, 1.0, 1.0}, {2, 3, 1.0, 1.0}});
    SamplerParams params;  // branching 4, depth 4
    params.rng_seed = 11;
    const UtilityMap u = compute_edge_utility(sample_short_diverse_paths(g, 0, 3, params));
    CHECK(u.value(make_edge_key(0, 1)) == 1.0 / 5.0);
    CHECK(u.value(make_edge_key(1, 2)) == 1.0 / 5.0);
    CHECK(u.value(make_edge_key(2, 3)) == 1.0 / 5.0);
}

TEST_CASE("depth-one appearances add a branching-discounted share") {
    const UtilityMap u = compute_edge_utility(two_level_tree());
    // On the root and one depth-1 child: 1/5 + 1/(4*5).
    CHECK(u.value(make_edge_key(0, 1)) == doctest::Approx(0.25).epsilon(1e-14));
    // Root only.
    CHECK(u.value(make_edge_key(1, 2)) == 1.0 / 5.0);
    // Child only.
    CHECK(u.value(make_edge_key(1, 3)) == doctest::Approx(0.05).epsilon(1e-14));
    // Absent from every sampled path.
    CHECK(u.value(make_edge_key(2, 3)) == 0.0);
}

TEST_CASE("duplicate routes in a tree accumulate utility per occurrence") {
    PathTree tree;
    tree.params.branching = 2;
    tree.params.depth = 1;
    PathTreeNode child;
    child.path = Path{{0, 1}};
    child.depth = 1;
    PathTreeNode root;
    root.path = Path{{0, 1}};
    root.depth = 0;
    root.children = {child, child};
    tree.root.push_back(root);
    // 1/2 from the root, 1/4 from each duplicated child.
    CHECK(compute_edge_utility(tree).value(make_edge_key(0, 1)) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("utilities stay within the unit interval across random trees") {
    Rng rng(0xC0FFEE);
    for (int i = 0; i < 150; ++i) {
        const Graph g = random_quarter_graph(rng, 3, 12, 0.5);
        const auto n = static_cast<NodeId>(g.node_count());
        const NodeId src = static_cast<NodeId>(rng.next_below(n));
        NodeId dst = static_cast<NodeId>(rng.next_below(n));
        if (dst == src) dst = (dst + 1) % n;
        SamplerParams params;
        params.branching = 1 + static_cast<int>(rng.next_below(6));
        params.depth = static_cast<int>(rng.next_below(6));
        params.obstacle_radius = static_cast<int>(rng.next_below(3));
        params.rng_seed = rng.next_u64();
        const UtilityMap u =
            compute_edge_utility(sample_short_diverse_paths(g, src, dst, params));
        for (const auto& [key, value] : u.values()) {
            CHECK(value >= 0.0);
            CHECK(value <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("utility rows dump as sorted csv") {
    UtilityMap u(std::unordered_map<EdgeKey, double>{{make_edge_key(2, 3), 0.25},
                                                     {make_edge_key(0, 1), 0.5}});
    CHECK(utility_csv(u) == "edge,utility\n0-1,0.5\n2-3,0.25\n");
}

TEST_CASE("a node's observation reward sums its unseen visible utilities") {
    const Graph g(4, {{0, 1, 1.0, 1.0}, {1, 2, 1.0, 1.0}, {2, 3, 1.0, 1.0}});
    std::vector<std::vector<EdgeKey>> extra(4);
    extra[0] = {make_edge_key(1, 2)};  // node 0 also sees a distant edge
    const VisibilityMap vis(g, std::move(extra));
    const UtilityMap u(std::unordered_map<EdgeKey, double>{{make_edge_key(0, 1), 0.2},
                                                           {make_edge_key(1, 2), 0.25}});

    ObservedSet obs;
    CHECK(node_observation_reward(0, vis, u, obs) == doctest::Approx(0.45).epsilon(1e-14));
    CHECK(obs.observed.empty());  // pure: the caller's set is untouched

    obs.mark(make_edge_key(0, 1));
    obs.mark(make_edge_key(1, 2));
    CHECK(node_observation_reward(0, vis, u, obs) == 0.0);

    // A node with nothing visible scores zero.
    const Graph sparse(3, {{0, 1, 1.0, 1.0}});
    const VisibilityMap adj = VisibilityMap::adjacency_only(sparse);
    CHECK(node_observation_reward(2, adj, UtilityMap{}, ObservedSet{}) == 0.0);
}

TEST_CASE("at weight zero a path's reward is just its negated cost") {
    const Graph g = unit_grid(3, 3);
    const VisibilityMap vis = VisibilityMap::adjacency_only(g);
    const UtilityMap u(std::unordered_map<EdgeKey, double>{{make_edge_key(0, 1), 0.7}});
    const Path p{{0, 1, 2, 5, 8}};
    CHECK(path_reward(p, 0.0, g, vis, u, ObservedSet{}) == -path_cost(g, p));
}

TEST_CASE("a single unit edge with utility 0.2 scores minus 0.4 at weight 3") {
    const Graph g(2, {{0, 1, 1.0, 1.0}});
    const VisibilityMap vis = VisibilityMap::adjacency_only(g);
    const UtilityMap u(std::unordered_map<EdgeKey, double>{{make_edge_key(0, 1), 0.2}});
    const Path p{{0, 1}};
    CHECK(path_reward(p, 3.0, g, vis, u, ObservedSet{}) ==
          doctest::Approx(-0.4).epsilon(1e-14));
    CHECK_THROWS_AS(path_reward(Path{{0, 9}}, 3.0, g, vis, u, ObservedSet{}),
                    std::invalid_argument);
}

TEST_CASE("an edge seen from two nodes of the same path counts once") {
    const Graph g(3, {{0, 1, 1.0, 1.0}, {1, 2, 1.0, 1.0}});
    // Both endpoints of the walk see edge 0-1; node 2 sees it too.
    std::vector<std::vector<EdgeKey>> extra(3);
    extra[2] = {make_edge_key(0, 1)};
    const VisibilityMap vis(g, std::move(extra));
    const UtilityMap u(std::unordered_map<EdgeKey, double>{{make_edge_key(0, 1), 0.5},
                                                           {make_edge_key(1, 2), 0.25}});
    const Path p{{0, 1, 2}};
    const ObservedSet obs;
    // Each distinct visible edge contributes exactly once: 0.5 + 0.25.
    CHECK(observation_part(p, g, vis, u, obs) == doctest::Approx(0.75).epsilon(1e-14));

    // Evaluating again gives the same number and leaves the set untouched.
    const double first = path_reward(p, 2.0, g, vis, u, obs);
    CHECK(path_reward(p, 2.0, g, vis, u, obs) == first);
    CHECK(obs.observed.empty());
}

TEST_CASE("observation reward never exceeds the distinct visible total") {
    Rng rng(0xFACADE);
    for (int i = 0; i < 25; ++i) {
        const Graph g = unit_grid(4, 4);
        SamplerParams params;
        params.branching = 3;
        params.depth = 2;
        params.rng_seed = rng.next_u64();
        const PathTree tree = sample_short_diverse_paths(g, 0, 15, params);
        const UtilityMap u = compute_edge_utility(tree);
        const VisibilityMap vis = VisibilityMap::adjacency_only(g);
        for (const FlatPath& entry : flatten(tree)) {
            EdgeKeySet distinct;
            for (NodeId v : entry.path.nodes) {
                for (EdgeKey e : vis.visible(v)) distinct.insert(e);
            }
            double total = 0.0;
            for (EdgeKey e : distinct) total += u.value(e);
            CHECK(observation_part(entry.path, g, vis, u, ObservedSet{}) <= total + 1e-12);
        }
    }
}

TEST_CASE("selection prefers observation value when the weight affords it") {
    // A: direct hop, cost 10, sees nothing of value.
    // B: detour through 2, cost 12, sees the utility-1 edge 2-3.
    const Graph g(4, {{0, 1, 10.0, 10.0}, {0, 2, 6.0, 6.0}, {1, 2, 6.0, 6.0}, {2, 3, 1.0, 1.0}});
    const VisibilityMap vis = VisibilityMap::adjacency_only(g);
    const UtilityMap u(std::unordered_map<EdgeKey, double>{{make_edge_key(2, 3), 1.0}});
    const std::vector<FlatPath> candidates = {{Path{{0, 1}}, 0}, {Path{{0, 2, 1}}, 1}};

    const ObservedSet obs;
    CHECK(select_best_path(candidates, 3.0, g, vis, u, obs).nodes ==
          std::vector<NodeId>{0, 2, 1});
    // With no appetite for observation the cheap hop wins.
    CHECK(select_best_path(candidates, 0.0, g, vis, u, obs).nodes == std::vector<NodeId>{0, 1});
}

TEST_CASE("selection ties break toward cheaper paths, then list order") {
    const Graph g(4, {{0, 1, 10.0, 10.0}, {0, 2, 6.0, 6.0}, {1, 2, 6.0, 6.0}, {2, 3, 1.0, 1.0}});
    const VisibilityMap vis = VisibilityMap::adjacency_only(g);
    const ObservedSet obs;

    // Rewards tie at -10 (12 - 2 vs 10 - 0): the cheaper direct hop wins even
    // though the detour is listed first.
    const UtilityMap u(std::unordered_map<EdgeKey, double>{{make_edge_key(2, 3), 2.0}});
    const std::vector<FlatPath> tied = {{Path{{0, 2, 1}}, 1}, {Path{{0, 1}}, 0}};
    CHECK(select_best_path(tied, 1.0, g, vis, u, obs).nodes == std::vector<NodeId>{0, 1});

    // Two identical candidates: the first occurrence is returned.
    const std::vector<FlatPath> twins = {{Path{{0, 1}}, 0}, {Path{{0, 1}}, 1}};
    CHECK(&select_best_path(twins, 1.0, g, vis, u, obs) == &twins[0].path);

    CHECK_THROWS_AS(select_best_path({}, 1.0, g, vis, u, obs), std::invalid_argument);
}

TEST_CASE("raising the weight never lowers the chosen observation value") {
    Rng rng(0xA11CE);
    for (int i = 0; i < 10; ++i) {
        const Graph g = unit_grid(4, 4);
        SamplerParams params;
        params.rng_seed = rng.next_u64();
        const PathTree tree = sample_short_diverse_paths(g, 0, 15, params);
        const UtilityMap u = compute_edge_utility(tree);
        const VisibilityMap vis = VisibilityMap::adjacency_only(g);
        const std::vector<FlatPath> candidates = flatten(tree);
        const ObservedSet obs;

        double prev = -1.0;
        for (double lambda : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
            const Path& sel = select_best_path(candidates, lambda, g, vis, u, obs);
            const double robs = observation_part(sel, g, vis, u, obs);
            CHECK(robs >= prev - 1e-12);
            prev = robs;
        }
    }
}

TEST_CASE("weight-zero selection over a fresh tree matches plain search cost") {
    Rng rng(0xBEAD5);
    int covered = 0;
    for (int i = 0; i < 20; ++i) {
        const Graph g = random_quarter_graph(rng, 4, 10, 0.5);
        const auto n = static_cast<NodeId>(g.node_count());
        const NodeId src = static_cast<NodeId>(rng.next_below(n));
        NodeId dst = static_cast<NodeId>(rng.next_below(n));
        if (dst == src) dst = (dst + 1) % n;
        SamplerParams params;
        params.branching = 3;
        params.depth = 2;
        params.rng_seed = rng.next_u64();
        const PathTree tree = sample_short_diverse_paths(g, src, dst, params);
        if (tree.empty()) continue;
        ++covered;
        const UtilityMap u = compute_edge_utility(tree);
        const VisibilityMap vis = VisibilityMap::adjacency_only(g);
        const Path& sel = select_best_path(flatten(tree), 0.0, g, vis, u, ObservedSet{});
        CHECK(path_cost(g, sel) == shortest_path(g, src, dst)->cost);
    }
    CHECK(covered > 5);
}
