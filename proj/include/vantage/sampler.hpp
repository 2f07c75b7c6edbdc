#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vantage/graph.hpp"

namespace vantage {

struct SamplerParams {
    int branching = 4;        // virtual obstacles spawned per path
    int depth = 4;            // tree depth
    int obstacle_radius = 1;  // hop radius of each virtual obstacle
    std::uint64_t rng_seed = 0;
};

// All edges connecting two nodes that lie within `radius` hops of `center`
// (unweighted hops). radius 0 spans no edge. Sorted ascending.
std::vector<EdgeKey> virtual_obstacle(const Graph& g, NodeId center, int radius);

struct PathTreeNode {
    Path path;
    int depth = 0;
    // Union of the virtual obstacles placed on the branch from the root
    // down to (and including) this node.
    std::vector<EdgeKey> removed_edges;
    std::vector<PathTreeNode> children;
};

// Rooted tree of short diverse paths: the root holds the shortest path, and
// each child re-solves after dropping a virtual obstacle onto its parent's
// path. A node is omitted when its obstacle disconnects source from target
// or when its path merely re-derives a route already in the tree, so the
// tree holds at most sum(branching^i, i=0..depth) nodes, all with distinct
// routes. An empty tree (no root) means the target was unreachable to begin
// with.
struct PathTree {
    std::vector<PathTreeNode> root;  // zero or one element
    SamplerParams params;

    bool empty() const { return root.empty(); }
    std::size_t size() const;
};

// Obstacle centers are drawn uniformly without replacement from the interior
// nodes of the parent path (endpoints excluded); masked edges are excluded
// from every search in addition to the branch's own removed edges.
// Deterministic in (graph, src, dst, params, masked).
PathTree sample_short_diverse_paths(const Graph& g, NodeId src, NodeId dst,
                                    const SamplerParams& params,
                                    const EdgeKeySet& masked = {});

struct FlatPath {
    Path path;
    int depth = 0;
};

// Pre-order listing of the tree's (path, depth) records.
std::vector<FlatPath> flatten(const PathTree& tree);

// Indented per-node debug dump (depth, path, removed edges).
std::string dump_tree(const PathTree& tree);

}  // namespace vantage
