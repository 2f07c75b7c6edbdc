#include "vantage/sampler.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

#include "vantage/rng.hpp"

namespace vantage {
namespace {

// Stream tags for deriving per-node RNG state; arbitrary but frozen.
constexpr std::uint64_t kCenterDrawStream = 0xD7A3;

std::vector<NodeId> hop_ball(const Graph& g, NodeId center, int radius) {
    std::vector<int> hops(g.node_count(), -1);
    std::deque<NodeId> frontier{center};
    hops[center] = 0;
    std::vector<NodeId> ball{center};
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop_front();
        if (hops[u] == radius) continue;
        for (const Neighbor& n : g.neighbors(u)) {
            if (hops[n.to] < 0) {
                hops[n.to] = hops[u] + 1;
                ball.push_back(n.to);
                frontier.push_back(n.to);
            }
        }
    }
    return ball;
}

// Draw up to k interior nodes of the path, uniformly without replacement.
std::vector<NodeId> draw_obstacle_centers(const Path& path, int k, Rng& rng) {
    std::vector<NodeId> interior;
    if (path.nodes.size() > 2) {
        interior.assign(path.nodes.begin() + 1, path.nodes.end() - 1);
    }
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), interior.size());
    for (std::size_t i = 0; i < take; ++i) {  // partial Fisher-Yates
        const std::size_t j = i + rng.next_below(interior.size() - i);
        std::swap(interior[i], interior[j]);
    }
    interior.resize(take);
    return interior;
}

void expand(const Graph& g, NodeId src, NodeId dst, const SamplerParams& params,
            const EdgeKeySet& masked, PathTreeNode& node, std::uint64_t node_seed,
            std::set<std::vector<NodeId>>& seen) {
    if (node.depth >= params.depth) return;

    Rng rng(mix_seed(node_seed, kCenterDrawStream));
    const std::vector<NodeId> centers =
        draw_obstacle_centers(node.path, params.branching, rng);

    for (std::size_t i = 0; i < centers.size(); ++i) {
        std::vector<EdgeKey> obstacle = virtual_obstacle(g, centers[i], params.obstacle_radius);

        std::vector<EdgeKey> removed = node.removed_edges;
        removed.insert(removed.end(), obstacle.begin(), obstacle.end());
        std::sort(removed.begin(), removed.end());
        removed.erase(std::unique(removed.begin(), removed.end()), removed.end());

        EdgeKeySet search_mask = masked;
        search_mask.insert(removed.begin(), removed.end());

        auto result = shortest_path(g, src, dst, search_mask);
        if (!result) continue;  // obstacle disconnects: nothing to record
        // A detour that merely re-derives a route already in the tree adds
        // no diversity and would double-count its edges in the utility
        // accumulation, so only the first occurrence of a route is kept.
        if (!seen.insert(result->path.nodes).second) continue;

        PathTreeNode child;
        child.path = std::move(result->path);
        child.depth = node.depth + 1;
        child.removed_edges = std::move(removed);
        expand(g, src, dst, params, masked, child, mix_seed(node_seed, i + 1), seen);
        node.children.push_back(std::move(child));
    }
}

void flatten_into(const PathTreeNode& node, std::vector<FlatPath>& out) {
    out.push_back({node.path, node.depth});
    for (const PathTreeNode& child : node.children) flatten_into(child, out);
}

std::size_t count_nodes(const PathTreeNode& node) {
    std::size_t n = 1;
    for (const PathTreeNode& child : node.children) n += count_nodes(child);
    return n;
}

void dump_node(const PathTreeNode& node, std::ostringstream& out) {
    for (int i = 0; i < node.depth; ++i) out << "  ";
    out << "depth=" << node.depth << " path=[";
    for (std::size_t i = 0; i < node.path.nodes.size(); ++i) {
        if (i) out << " ";
        out << node.path.nodes[i];
    }
    out << "] removed={";
    for (std::size_t i = 0; i < node.removed_edges.size(); ++i) {
        if (i) out << " ";
        out << edge_key_to_string(node.removed_edges[i]);
    }
    out << "}\n";
    for (const PathTreeNode& child : node.children) dump_node(child, out);
}

}  // namespace

std::vector<EdgeKey> virtual_obstacle(const Graph& g, NodeId center, int radius) {
    if (!g.has_node(center)) {
        throw std::invalid_argument("virtual_obstacle: unknown node id");
    }
    std::vector<EdgeKey> edges;
    if (radius <= 0) return edges;

    const std::vector<NodeId> ball = hop_ball(g, center, radius);
    std::vector<char> inside(g.node_count(), 0);
    for (NodeId v : ball) inside[v] = 1;
    for (NodeId v : ball) {
        for (const Neighbor& n : g.neighbors(v)) {
            if (v < n.to && inside[n.to]) edges.push_back(make_edge_key(v, n.to));
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

std::size_t PathTree::size() const {
    return root.empty() ? 0 : count_nodes(root.front());
}

PathTree sample_short_diverse_paths(const Graph& g, NodeId src, NodeId dst,
                                    const SamplerParams& params, const EdgeKeySet& masked) {
    if (!g.has_node(src) || !g.has_node(dst)) {
        throw std::invalid_argument("sample_short_diverse_paths: unknown node id");
    }
    if (params.branching < 1) {
        throw std::invalid_argument("sampler branching must be >= 1");
    }
    if (params.depth < 0 || params.obstacle_radius < 0) {
        throw std::invalid_argument("sampler depth and radius must be non-negative");
    }

    PathTree tree;
    tree.params = params;

    auto root_path = shortest_path(g, src, dst, masked);
    if (!root_path) return tree;  // unreachable: empty tree, caller reports failure

    PathTreeNode root;
    root.path = std::move(root_path->path);
    root.depth = 0;
    std::set<std::vector<NodeId>> seen;
    seen.insert(root.path.nodes);
    expand(g, src, dst, params, masked, root, params.rng_seed, seen);
    tree.root.push_back(std::move(root));
    return tree;
}

std::vector<FlatPath> flatten(const PathTree& tree) {
    std::vector<FlatPath> out;
    if (!tree.empty()) flatten_into(tree.root.front(), out);
    return out;
}

std::string dump_tree(const PathTree& tree) {
    std::ostringstream out;
    if (tree.empty()) {
        out << "(empty tree)\n";
    } else {
        dump_node(tree.root.front(), out);
    }
    return out.str();
}

}  // namespace vantage
