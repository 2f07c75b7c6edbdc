#include "vantage/reward.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vantage {

UtilityMap compute_edge_utility(const PathTree& tree) {
    std::unordered_map<EdgeKey, double> values;
    const double levels = static_cast<double>(tree.params.depth) + 1.0;
    for (const FlatPath& entry : flatten(tree)) {
        const double weight =
            1.0 / (std::pow(static_cast<double>(tree.params.branching), entry.depth) * levels);
        const auto& nodes = entry.path.nodes;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            values[make_edge_key(nodes[i], nodes[i + 1])] += weight;
        }
    }
    return UtilityMap(std::move(values));
}

std::string utility_csv(const UtilityMap& u) {
    std::vector<std::pair<EdgeKey, double>> rows(u.values().begin(), u.values().end());
    std::sort(rows.begin(), rows.end());
    std::ostringstream out;
    out << "edge,utility\n";
    for (const auto& [key, value] : rows) {
        out << edge_key_to_string(key) << "," << value << "\n";
    }
    return out.str();
}

double node_observation_reward(NodeId v, const VisibilityMap& vis, const UtilityMap& u,
                               const ObservedSet& obs) {
    double reward = 0.0;
    for (EdgeKey e : vis.visible(v)) {
        if (!obs.contains(e)) reward += u.value(e);
    }
    return reward;
}

double path_reward(const Path& p, double lambda, const Graph& g, const VisibilityMap& vis,
                   const UtilityMap& u, const ObservedSet& obs) {
    if (!path_valid(g, p)) throw std::invalid_argument("path_reward: invalid path");
    // Edges first seen while walking this candidate; together with the
    // caller's set this acts as the working copy of the observed indicator.
    EdgeKeySet seen_on_path;
    double observation = 0.0;
    for (NodeId v : p.nodes) {
        for (EdgeKey e : vis.visible(v)) {
            if (obs.contains(e)) continue;
            if (seen_on_path.insert(e).second) observation += u.value(e);
        }
    }
    return lambda * observation - path_cost(g, p);
}

const Path& select_best_path(const std::vector<FlatPath>& candidates, double lambda,
                             const Graph& g, const VisibilityMap& vis, const UtilityMap& u,
                             const ObservedSet& obs) {
    if (candidates.empty()) {
        throw std::invalid_argument("select_best_path: no candidates");
    }
    std::size_t best = 0;
    double best_reward = path_reward(candidates[0].path, lambda, g, vis, u, obs);
    double best_cost = path_cost(g, candidates[0].path);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double reward = path_reward(candidates[i].path, lambda, g, vis, u, obs);
        if (reward > best_reward) {
            best = i;
            best_reward = reward;
            best_cost = path_cost(g, candidates[i].path);
        } else if (reward == best_reward) {
            const double cost = path_cost(g, candidates[i].path);
            if (cost < best_cost) {
                best = i;
                best_cost = cost;
            }
        }
    }
    return candidates[best].path;
}

}  // namespace vantage
