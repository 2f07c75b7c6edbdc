#include "vantage/agent.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "vantage/rng.hpp"

namespace vantage {
namespace {

constexpr std::uint64_t kRealizationStream = 0xB10C;
constexpr std::uint64_t kAgentStream = 0xA6E7;
constexpr std::uint64_t kUtilityTreeStream = 0;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool remaining_plan_blocked(const Path& plan, std::size_t pos, const EdgeKeySet& blocked) {
    for (std::size_t i = pos; i + 1 < plan.nodes.size(); ++i) {
        if (blocked.count(make_edge_key(plan.nodes[i], plan.nodes[i + 1]))) return true;
    }
    return false;
}

}  // namespace

TrialResult run_trial(const Graph& g, const VisibilityMap& vis,
                      const BlockageRealization& realization, NodeId src, NodeId dst,
                      const AgentConfig& cfg) {
    if (!g.has_node(src) || !g.has_node(dst)) {
        throw std::invalid_argument("run_trial: unknown node id");
    }

    const std::uint64_t agent_seed = cfg.sampler.rng_seed;
    const bool reward_agent = cfg.kind == AgentKind::RewardMax;

    TrialResult result;
    UtilityMap utility;
    ObservedSet observed;
    EdgeKeySet known_blocked;
    int plan_events = 0;

    // Plans from `from` on the believed graph; empty path means no route.
    auto plan_from = [&](NodeId from) -> Path {
        const auto start = Clock::now();
        Path plan;
        if (reward_agent) {
            SamplerParams params = cfg.sampler;
            params.rng_seed = mix_seed(agent_seed, static_cast<std::uint64_t>(plan_events) + 1);
            const PathTree tree = sample_short_diverse_paths(g, from, dst, params, known_blocked);
            const std::vector<FlatPath> candidates = flatten(tree);
            if (!candidates.empty()) {
                plan = select_best_path(candidates, cfg.lambda, g, vis, utility, observed);
            }
        } else {
            if (auto sp = shortest_path(g, from, dst, known_blocked)) plan = sp->path;
        }
        result.plan_time_ms += elapsed_ms(start);
        ++plan_events;
        return plan;
    };

    if (reward_agent) {
        SamplerParams params = cfg.sampler;
        params.rng_seed = utility_tree_seed(agent_seed);
        const auto start = Clock::now();
        utility = compute_edge_utility(sample_short_diverse_paths(g, src, dst, params));
        result.plan_time_ms += elapsed_ms(start);
    }

    Path plan = plan_from(src);
    result.plan_count = plan_events;
    if (plan.empty()) {
        result.trajectory = {src};
        return result;  // unreachable from the start
    }
    result.initial_plan = plan.nodes;
    result.trajectory = {src};

    NodeId current = src;
    std::size_t pos = 0;  // plan.nodes[pos] == current

    while (current != dst) {
        StepLog step;
        step.node = current;
        for (EdgeKey e : vis.visible(current)) {
            if (observed.contains(e)) continue;
            observed.mark(e);
            step.newly_observed.push_back(e);
            if (realization.is_blocked(e)) {
                known_blocked.insert(e);
                step.newly_blocked.push_back(e);
            }
        }

        // Plans always avoid known blockages, so a hit here is newly seen.
        if (remaining_plan_blocked(plan, pos, known_blocked)) {
            ++result.replans;
            step.replanned = true;
            plan = plan_from(current);
            pos = 0;
            if (plan.empty()) {
                result.steps.push_back(std::move(step));
                result.plan_count = plan_events;
                return result;  // believed graph disconnected: trial fails
            }
        }
        result.steps.push_back(std::move(step));

        const NodeId next = plan.nodes[pos + 1];
        const EdgeKey key = make_edge_key(current, next);
        if (realization.is_blocked(key)) {
            // Unreachable while vis includes incident edges; a hit means the
            // visibility invariant was broken upstream.
            throw std::logic_error("agent attempted to traverse blocked edge " +
                                   edge_key_to_string(key));
        }
        result.total_cost += g.cost(current, next);
        result.trajectory.push_back(next);
        current = next;
        ++pos;
    }

    result.success = true;
    result.plan_count = plan_events;
    return result;
}

BlockageModel BlockageModel::independent_edges(std::vector<EdgeKey> edges, double p) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    BlockageModel model;
    model.p = p;
    model.units.reserve(edges.size());
    for (EdgeKey e : edges) model.units.push_back({e});
    return model;
}

BlockageModel BlockageModel::atomic_groups(std::vector<std::vector<EdgeKey>> groups, double p) {
    BlockageModel model;
    model.p = p;
    model.units = std::move(groups);
    return model;
}

BlockageRealization BlockageModel::draw(std::uint64_t seed) const {
    Rng rng(seed);
    BlockageRealization realization;
    for (const auto& unit : units) {
        if (rng.bernoulli(p)) realization.blocked.insert(unit.begin(), unit.end());
    }
    return realization;
}

std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index) {
    return mix_seed(master_seed, static_cast<std::uint64_t>(trial_index));
}

BlockageRealization draw_trial_realization(const BlockageModel& model,
                                           std::uint64_t master_seed, int trial_index) {
    return model.draw(mix_seed(trial_seed(master_seed, trial_index), kRealizationStream));
}

std::uint64_t trial_agent_seed(std::uint64_t master_seed, int trial_index) {
    return mix_seed(trial_seed(master_seed, trial_index), kAgentStream);
}

std::uint64_t utility_tree_seed(std::uint64_t agent_seed) {
    return mix_seed(agent_seed, kUtilityTreeStream);
}

BatchSummary summarize(const std::vector<TrialResult>& trials) {
    BatchSummary summary;
    summary.num_trials = static_cast<int>(trials.size());
    double sum = 0.0;
    double plan_time = 0.0;
    long plan_events = 0;
    int successes = 0;
    for (const TrialResult& t : trials) {
        plan_time += t.plan_time_ms;
        plan_events += t.plan_count;
        if (t.success) {
            sum += t.total_cost;
            ++successes;
        } else {
            ++summary.failures;
        }
    }
    if (successes > 0) {
        summary.mean = sum / successes;
        double sq = 0.0;
        for (const TrialResult& t : trials) {
            if (t.success) sq += (t.total_cost - summary.mean) * (t.total_cost - summary.mean);
        }
        summary.stddev = std::sqrt(sq / successes);
    }
    if (plan_events > 0) summary.mean_plan_time_ms = plan_time / static_cast<double>(plan_events);
    return summary;
}

namespace {

TrialResult run_one(const Graph& g, const VisibilityMap& vis, NodeId src, NodeId dst,
                    const AgentConfig& cfg, const BlockageModel& model,
                    std::uint64_t master_seed, int index) {
    const BlockageRealization realization = draw_trial_realization(model, master_seed, index);
    AgentConfig trial_cfg = cfg;
    trial_cfg.sampler.rng_seed = trial_agent_seed(master_seed, index);
    return run_trial(g, vis, realization, src, dst, trial_cfg);
}

}  // namespace

BatchResult run_batch(const Graph& g, const VisibilityMap& vis, NodeId src, NodeId dst,
                      const AgentConfig& cfg, const BlockageModel& model,
                      const BatchParams& params, int num_threads) {
    BatchResult result;
    result.trials.resize(static_cast<std::size_t>(params.num_trials));
    std::string error;

    const int n = params.num_trials;
    const int threads = num_threads > 0 ? num_threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int i = 0; i < n; ++i) {
        try {
            result.trials[static_cast<std::size_t>(i)] =
                run_one(g, vis, src, dst, cfg, model, params.master_seed, i);
        } catch (const std::exception& e) {
#pragma omp critical
            if (error.empty()) error = e.what();
        }
    }
    if (!error.empty()) throw std::runtime_error("run_batch: trial failed: " + error);

    result.summary = summarize(result.trials);
    return result;
}

BatchResult run_batch_serial(const Graph& g, const VisibilityMap& vis, NodeId src, NodeId dst,
                             const AgentConfig& cfg, const BlockageModel& model,
                             const BatchParams& params) {
    BatchResult result;
    result.trials.reserve(static_cast<std::size_t>(params.num_trials));
    for (int i = 0; i < params.num_trials; ++i) {
        result.trials.push_back(run_one(g, vis, src, dst, cfg, model, params.master_seed, i));
    }
    result.summary = summarize(result.trials);
    return result;
}

}  // namespace vantage
