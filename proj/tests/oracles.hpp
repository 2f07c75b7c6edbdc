#pragma once
// Independent reference implementations and helpers for the test suite.
// Everything here is deliberately naive (exhaustive enumeration, plain
// loops): these are the oracles the fast library code is checked against,
// so they must be obviously correct rather than fast.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "vantage/environments.hpp"
#include "vantage/graph.hpp"
#include "vantage/rng.hpp"

namespace testutil {

// Minimum cost over every simple path, by exhaustive DFS. Only usable on
// small graphs (roughly <= 12 nodes).
inline std::optional<double> brute_force_shortest(const vantage::Graph& g, vantage::NodeId src,
                                                  vantage::NodeId dst,
                                                  const vantage::EdgeKeySet& masked = {}) {
    std::vector<char> visited(g.node_count(), 0);
    double best = std::numeric_limits<double>::infinity();
    std::function<void(vantage::NodeId, double)> dfs = [&](vantage::NodeId u, double cost) {
        if (u == dst) {
            best = std::min(best, cost);
            return;
        }
        visited[u] = 1;
        for (const vantage::Neighbor& n : g.neighbors(u)) {
            if (visited[n.to]) continue;
            if (masked.count(vantage::make_edge_key(u, n.to))) continue;
            dfs(n.to, cost + n.cost);
        }
        visited[u] = 0;
    };
    dfs(src, 0.0);
    if (best == std::numeric_limits<double>::infinity()) return std::nullopt;
    return best;
}

// Random graph whose directed costs are multiples of 0.25 in [0.25, 4]: every
// path cost is then exactly representable in binary, so oracle comparisons
// can use plain ==. May be disconnected; callers treat that as a valid case.
inline vantage::Graph random_quarter_graph(vantage::Rng& rng, int min_nodes, int max_nodes,
                                           double edge_prob) {
    const int n = min_nodes + static_cast<int>(rng.next_below(
                                  static_cast<std::uint64_t>(max_nodes - min_nodes + 1)));
    std::vector<vantage::EdgeSpec> edges;
    for (vantage::NodeId u = 0; u + 1 < static_cast<vantage::NodeId>(n); ++u) {
        for (vantage::NodeId v = u + 1; v < static_cast<vantage::NodeId>(n); ++v) {
            if (rng.next_double() >= edge_prob) continue;
            const double cost_uv = 0.25 * static_cast<double>(1 + rng.next_below(16));
            const double cost_vu = 0.25 * static_cast<double>(1 + rng.next_below(16));
            edges.push_back({u, v, cost_uv, cost_vu});
        }
    }
    return vantage::Graph(static_cast<std::size_t>(n), edges);
}

// 4-connected grid with unit costs in both directions.
inline vantage::Graph unit_grid(int rows, int cols) {
    const vantage::GridSpec grid{rows, cols};
    std::vector<vantage::EdgeSpec> edges;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const vantage::NodeId u = grid.node_id(r, c);
            if (r + 1 < rows) edges.push_back({u, grid.node_id(r + 1, c), 1.0, 1.0});
            if (c + 1 < cols) edges.push_back({u, grid.node_id(r, c + 1), 1.0, 1.0});
        }
    }
    return vantage::Graph(grid.node_count(), edges);
}

// The fixed plateau world is immutable; build it once per test binary.
inline const vantage::MapBundle& builtin_map() {
    static const vantage::MapBundle m = vantage::build_plateau_map();
    return m;
}

inline double mean(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

// Population standard deviation (divide by N), matching the harness.
inline double population_stddev(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const double mu = mean(v);
    double sq = 0.0;
    for (double x : v) sq += (x - mu) * (x - mu);
    return std::sqrt(sq / static_cast<double>(v.size()));
}

// Upper end of the two-sided 95% percentile-bootstrap confidence interval
// for stat(a) - stat(b), with unpaired resampling. Deterministic in `seed`.
// A negative return means stat(a) < stat(b) at 95% confidence.
template <typename Stat>
inline double bootstrap_diff_upper(const std::vector<double>& a, const std::vector<double>& b,
                                   int resamples, std::uint64_t seed, Stat stat) {
    vantage::Rng rng(seed);
    std::vector<double> diffs;
    diffs.reserve(static_cast<std::size_t>(resamples));
    std::vector<double> ra(a.size());
    std::vector<double> rb(b.size());
    for (int i = 0; i < resamples; ++i) {
        for (std::size_t k = 0; k < a.size(); ++k) ra[k] = a[rng.next_below(a.size())];
        for (std::size_t k = 0; k < b.size(); ++k) rb[k] = b[rng.next_below(b.size())];
        diffs.push_back(stat(ra) - stat(rb));
    }
    std::sort(diffs.begin(), diffs.end());
    const auto idx = static_cast<std::size_t>(0.975 * static_cast<double>(diffs.size() - 1));
    return diffs[idx];
}

// sum over i in [0, depth] of branching^i, saturating well above any
// realistic tree size.
inline std::size_t tree_size_bound(int branching, int depth) {
    std::size_t total = 0;
    std::size_t level = 1;
    for (int i = 0; i <= depth; ++i) {
        total += level;
        if (level > (std::size_t{1} << 40)) break;
        level *= static_cast<std::size_t>(branching);
    }
    return total;
}

// what() of the exception `fn` throws, or "" if it does not throw.
template <typename Fn>
inline std::string capture_error(Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

inline bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace testutil
