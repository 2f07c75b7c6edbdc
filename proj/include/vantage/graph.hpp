#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace vantage {

using NodeId = std::uint32_t;

// Canonical identifier for an undirected edge: the smaller endpoint packed
// into the high 32 bits. Blockages and observations are bidirectional, so
// all of that state is keyed on EdgeKey rather than on directed edges.
using EdgeKey = std::uint64_t;

constexpr EdgeKey make_edge_key(NodeId a, NodeId b) {
    return a < b ? (static_cast<EdgeKey>(a) << 32) | b
                 : (static_cast<EdgeKey>(b) << 32) | a;
}
constexpr NodeId edge_key_a(EdgeKey k) { return static_cast<NodeId>(k >> 32); }
constexpr NodeId edge_key_b(EdgeKey k) { return static_cast<NodeId>(k & 0xFFFFFFFFULL); }

std::string edge_key_to_string(EdgeKey k);                 // "a-b"
EdgeKey edge_key_from_string(const std::string& token);    // throws on malformed input

using EdgeKeySet = std::unordered_set<EdgeKey>;

// One undirected connection with its two directed traversal costs.
struct EdgeSpec {
    NodeId u = 0;
    NodeId v = 0;
    double cost_uv = 1.0;
    double cost_vu = 1.0;
};

struct Neighbor {
    NodeId to;
    double cost;
};

// Optional per-node placement for grid-derived graphs (used by the
// environments and the SVG renderer; irrelevant to search).
struct GridCoord {
    int row = 0;
    int col = 0;
    double height = 0.0;
};

// Directed graph with symmetric connectivity: for every edge (u,v) the
// reverse edge (v,u) exists, possibly at a different cost. Immutable after
// construction and safe to share across threads; all "removal" during
// planning happens through edge masks, never by mutating the graph.
class Graph {
public:
    Graph() = default;  // empty graph; useful as a placeholder before loading
    Graph(std::size_t node_count, const std::vector<EdgeSpec>& edges,
          std::vector<GridCoord> coords = {});

    std::size_t node_count() const { return adj_.size(); }
    std::size_t undirected_edge_count() const { return edge_keys_.size(); }

    // Sorted by target id; iteration order is part of the determinism contract.
    const std::vector<Neighbor>& neighbors(NodeId v) const;

    bool has_node(NodeId v) const { return v < adj_.size(); }
    bool has_edge(NodeId u, NodeId v) const;
    double cost(NodeId u, NodeId v) const;  // directed cost; throws if edge absent

    // Canonical undirected id; validates that the edge exists.
    EdgeKey undirected_id(NodeId u, NodeId v) const;

    // All undirected edge keys, ascending.
    const std::vector<EdgeKey>& edge_keys() const { return edge_keys_; }

    bool has_coords() const { return !coords_.empty(); }
    const GridCoord& coord(NodeId v) const;
    const std::vector<GridCoord>& coords() const { return coords_; }

private:
    std::vector<std::vector<Neighbor>> adj_;
    std::vector<EdgeKey> edge_keys_;
    std::vector<GridCoord> coords_;
};

// Node sequence; consecutive nodes must be graph edges. A single node is a
// valid (zero-cost) path.
struct Path {
    std::vector<NodeId> nodes;

    bool empty() const { return nodes.empty(); }
    std::size_t hops() const { return nodes.empty() ? 0 : nodes.size() - 1; }
    bool operator==(const Path&) const = default;
};

bool path_valid(const Graph& g, const Path& p);
// Sum of directed costs along the path; throws on invalid paths.
double path_cost(const Graph& g, const Path& p);
// True if any traversed edge's undirected key is in `keys`.
bool path_uses_any(const Path& p, const EdgeKeySet& keys);

struct PathResult {
    Path path;
    double cost = 0.0;
};

// Dijkstra over edges whose undirected key is not in `masked`.
// Deterministic: nodes pop in (distance, id) order and equal-cost relaxations
// keep the smaller predecessor id, so identical inputs give the identical
// node sequence on every platform. Returns nullopt if dst is unreachable.
std::optional<PathResult> shortest_path(const Graph& g, NodeId src, NodeId dst,
                                        const EdgeKeySet& masked = {});

// Per-node set of edges whose status is revealed for free when standing at
// the node. Always a superset of the node's incident edges: that floor is
// added at construction, so an agent can never be surprised by the edge it
// is about to traverse.
class VisibilityMap {
public:
    VisibilityMap() = default;  // empty map; useful as a placeholder before loading
    VisibilityMap(const Graph& g, std::vector<std::vector<EdgeKey>> vis);

    static VisibilityMap adjacency_only(const Graph& g);

    // Sorted ascending, duplicate-free.
    const std::vector<EdgeKey>& visible(NodeId v) const;
    std::size_t node_count() const { return vis_.size(); }

private:
    std::vector<std::vector<EdgeKey>> vis_;
};

// Ground-truth blocked set for one trial. Hidden from the agent; consulted
// only when the agent observes or traverses.
struct BlockageRealization {
    EdgeKeySet blocked;

    bool is_blocked(EdgeKey k) const { return blocked.count(k) > 0; }
};

}  // namespace vantage
