#include "vantage/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <stdexcept>

namespace vantage {

std::string edge_key_to_string(EdgeKey k) {
    return std::to_string(edge_key_a(k)) + "-" + std::to_string(edge_key_b(k));
}

EdgeKey edge_key_from_string(const std::string& token) {
    const auto dash = token.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 >= token.size()) {
        throw std::invalid_argument("malformed edge token: '" + token + "'");
    }
    std::size_t pos_a = 0, pos_b = 0;
    unsigned long a = 0, b = 0;
    try {
        a = std::stoul(token.substr(0, dash), &pos_a);
        b = std::stoul(token.substr(dash + 1), &pos_b);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed edge token: '" + token + "'");
    }
    if (pos_a != dash || pos_b != token.size() - dash - 1) {
        throw std::invalid_argument("malformed edge token: '" + token + "'");
    }
    return make_edge_key(static_cast<NodeId>(a), static_cast<NodeId>(b));
}

Graph::Graph(std::size_t node_count, const std::vector<EdgeSpec>& edges,
             std::vector<GridCoord> coords)
    : adj_(node_count), coords_(std::move(coords)) {
    if (!coords_.empty() && coords_.size() != node_count) {
        throw std::invalid_argument("coords size must match node count");
    }
    EdgeKeySet seen;
    seen.reserve(edges.size() * 2);
    edge_keys_.reserve(edges.size());
    for (const EdgeSpec& e : edges) {
        if (e.u >= node_count || e.v >= node_count) {
            throw std::invalid_argument("edge endpoint out of range");
        }
        if (e.u == e.v) {
            throw std::invalid_argument("self-loops are not allowed");
        }
        if (!(e.cost_uv > 0.0) || !(e.cost_vu > 0.0) ||
            !std::isfinite(e.cost_uv) || !std::isfinite(e.cost_vu)) {
            throw std::invalid_argument("edge costs must be finite and positive");
        }
        const EdgeKey key = make_edge_key(e.u, e.v);
        if (!seen.insert(key).second) {
            throw std::invalid_argument("duplicate edge " + edge_key_to_string(key));
        }
        edge_keys_.push_back(key);
        adj_[e.u].push_back({e.v, e.cost_uv});
        adj_[e.v].push_back({e.u, e.cost_vu});
    }
    for (auto& nbrs : adj_) {
        std::sort(nbrs.begin(), nbrs.end(),
                  [](const Neighbor& a, const Neighbor& b) { return a.to < b.to; });
    }
    std::sort(edge_keys_.begin(), edge_keys_.end());
}

const std::vector<Neighbor>& Graph::neighbors(NodeId v) const {
    if (!has_node(v)) throw std::invalid_argument("unknown node id " + std::to_string(v));
    return adj_[v];
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    if (!has_node(u) || !has_node(v)) return false;
    const auto& nbrs = adj_[u];
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v,
                               [](const Neighbor& n, NodeId id) { return n.to < id; });
    return it != nbrs.end() && it->to == v;
}

double Graph::cost(NodeId u, NodeId v) const {
    if (!has_node(u) || !has_node(v)) {
        throw std::invalid_argument("unknown node id");
    }
    const auto& nbrs = adj_[u];
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v,
                               [](const Neighbor& n, NodeId id) { return n.to < id; });
    if (it == nbrs.end() || it->to != v) {
        throw std::invalid_argument("no edge " + std::to_string(u) + "->" + std::to_string(v));
    }
    return it->cost;
}

EdgeKey Graph::undirected_id(NodeId u, NodeId v) const {
    if (!has_edge(u, v)) {
        throw std::invalid_argument("no edge between " + std::to_string(u) + " and " +
                                    std::to_string(v));
    }
    return make_edge_key(u, v);
}

const GridCoord& Graph::coord(NodeId v) const {
    if (!has_coords() || v >= coords_.size()) {
        throw std::invalid_argument("graph has no coordinate for node " + std::to_string(v));
    }
    return coords_[v];
}

bool path_valid(const Graph& g, const Path& p) {
    if (p.nodes.empty()) return false;
    for (NodeId v : p.nodes) {
        if (!g.has_node(v)) return false;
    }
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
        if (!g.has_edge(p.nodes[i], p.nodes[i + 1])) return false;
    }
    return true;
}

double path_cost(const Graph& g, const Path& p) {
    if (p.nodes.empty()) throw std::invalid_argument("empty path");
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
        total += g.cost(p.nodes[i], p.nodes[i + 1]);  // throws on non-adjacent pair
    }
    return total;
}

bool path_uses_any(const Path& p, const EdgeKeySet& keys) {
    if (keys.empty()) return false;
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
        if (keys.count(make_edge_key(p.nodes[i], p.nodes[i + 1]))) return true;
    }
    return false;
}

std::optional<PathResult> shortest_path(const Graph& g, NodeId src, NodeId dst,
                                        const EdgeKeySet& masked) {
    if (!g.has_node(src) || !g.has_node(dst)) {
        throw std::invalid_argument("shortest_path: unknown node id");
    }
    constexpr double kInf = std::numeric_limits<double>::infinity();
    constexpr NodeId kNone = std::numeric_limits<NodeId>::max();

    std::vector<double> dist(g.node_count(), kInf);
    std::vector<NodeId> pred(g.node_count(), kNone);
    std::vector<char> done(g.node_count(), 0);

    using Entry = std::pair<double, NodeId>;  // (distance, node): ties pop smaller id
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist[src] = 0.0;
    queue.push({0.0, src});

    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (done[u]) continue;
        done[u] = 1;
        if (u == dst) break;
        for (const Neighbor& n : g.neighbors(u)) {
            if (masked.count(make_edge_key(u, n.to))) continue;
            const double nd = d + n.cost;
            if (nd < dist[n.to]) {
                dist[n.to] = nd;
                pred[n.to] = u;
                queue.push({nd, n.to});
            } else if (nd == dist[n.to] && u < pred[n.to]) {
                // Equal-cost tie: keep the smaller predecessor id so the
                // reconstructed path is reproducible.
                pred[n.to] = u;
            }
        }
    }

    if (dist[dst] == kInf) return std::nullopt;

    Path path;
    for (NodeId v = dst; v != src; v = pred[v]) path.nodes.push_back(v);
    path.nodes.push_back(src);
    std::reverse(path.nodes.begin(), path.nodes.end());
    return PathResult{std::move(path), dist[dst]};
}

VisibilityMap::VisibilityMap(const Graph& g, std::vector<std::vector<EdgeKey>> vis)
    : vis_(std::move(vis)) {
    if (vis_.size() != g.node_count()) {
        throw std::invalid_argument("visibility map size must match node count");
    }
    for (NodeId v = 0; v < vis_.size(); ++v) {
        auto& set = vis_[v];
        for (EdgeKey k : set) {
            if (!g.has_edge(edge_key_a(k), edge_key_b(k))) {
                throw std::invalid_argument("visibility references missing edge " +
                                            edge_key_to_string(k));
            }
        }
        // Incident-edge floor.
        for (const Neighbor& n : g.neighbors(v)) set.push_back(make_edge_key(v, n.to));
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
    }
}

VisibilityMap VisibilityMap::adjacency_only(const Graph& g) {
    return VisibilityMap(g, std::vector<std::vector<EdgeKey>>(g.node_count()));
}

const std::vector<EdgeKey>& VisibilityMap::visible(NodeId v) const {
    if (v >= vis_.size()) throw std::invalid_argument("unknown node id " + std::to_string(v));
    return vis_[v];
}

}  // namespace vantage
