#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "vantage/graph.hpp"
#include "vantage/sampler.hpp"

namespace vantage {

// Frequency-weighted importance of each edge, derived from a sampled path
// tree: a path at depth i contributes 1 / (branching^i * (depth+1)) to every
// edge it traverses. Values are structurally bounded to [0, 1]; edges that
// appear in no sampled path have utility zero.
class UtilityMap {
public:
    UtilityMap() = default;
    explicit UtilityMap(std::unordered_map<EdgeKey, double> values)
        : values_(std::move(values)) {}

    double value(EdgeKey e) const {
        auto it = values_.find(e);
        return it == values_.end() ? 0.0 : it->second;
    }
    const std::unordered_map<EdgeKey, double>& values() const { return values_; }

private:
    std::unordered_map<EdgeKey, double> values_;
};

UtilityMap compute_edge_utility(const PathTree& tree);

// "edge,utility" rows sorted by edge key, for offline inspection.
std::string utility_csv(const UtilityMap& u);

// Edges whose status the agent has already seen. Grows monotonically over a
// trial; an observed edge never yields reward again.
struct ObservedSet {
    EdgeKeySet observed;

    bool contains(EdgeKey e) const { return observed.count(e) > 0; }
    void mark(EdgeKey e) { observed.insert(e); }
};

// Sum of utilities over the node's visible, not-yet-observed edges. Pure:
// `obs` is not modified.
double node_observation_reward(NodeId v, const VisibilityMap& vis, const UtilityMap& u,
                               const ObservedSet& obs);

// Total reward of a candidate path: lambda * R_obs - cost. R_obs walks the
// path with a working copy of the observed set, marking each node's visible
// edges before scoring later nodes, so an edge seen twice along the
// candidate counts once. The reward of a node therefore depends on the
// prefix walked before it (the reward is not Markovian).
double path_reward(const Path& p, double lambda, const Graph& g, const VisibilityMap& vis,
                   const UtilityMap& u, const ObservedSet& obs);

// Argmax of path_reward over the candidates. Ties go to the cheaper path,
// then to the earlier list position. Throws on an empty candidate list.
const Path& select_best_path(const std::vector<FlatPath>& candidates, double lambda,
                             const Graph& g, const VisibilityMap& vis, const UtilityMap& u,
                             const ObservedSet& obs);

}  // namespace vantage
