#pragma once

#include <cstdint>
#include <vector>

#include "vantage/graph.hpp"
#include "vantage/reward.hpp"
#include "vantage/sampler.hpp"

namespace vantage {

enum class AgentKind {
    // Samples diverse candidates and follows the argmax of
    // lambda * observation_reward - cost; replans when the current plan is
    // observed blocked.
    RewardMax,
    // Follows the plain shortest path on the believed graph and replans only
    // when the plan is observed blocked. Kept as a genuinely independent
    // implementation (no sampling, no reward): it doubles as the oracle for
    // the lambda=0 equivalence tests.
    ShortestPathBaseline,
};

struct AgentConfig {
    AgentKind kind = AgentKind::RewardMax;
    double lambda = 3.0;
    SamplerParams sampler;  // sampler.rng_seed seeds all per-trial randomness
};

struct StepLog {
    NodeId node = 0;
    std::vector<EdgeKey> newly_observed;
    std::vector<EdgeKey> newly_blocked;
    bool replanned = false;
};

struct TrialResult {
    bool success = false;
    double total_cost = 0.0;
    int replans = 0;
    std::vector<NodeId> trajectory;
    std::vector<NodeId> initial_plan;
    std::vector<StepLog> steps;
    double plan_time_ms = 0.0;  // wall time spent sampling + selecting, all plans
    int plan_count = 0;
};

// One observe/replan/move episode against a hidden realization. The agent
// starts with the full graph as its belief, deletes edges as it observes
// blockages, and fails (success=false) if its believed graph ever
// disconnects it from the target. Throws only if the agent would traverse a
// blocked edge, which the visibility floor makes impossible.
TrialResult run_trial(const Graph& g, const VisibilityMap& vis,
                      const BlockageRealization& realization, NodeId src, NodeId dst,
                      const AgentConfig& cfg);

// Randomness over which edges a trial blocks. Each unit (a single edge, or a
// group that blocks atomically) is blocked independently with probability p.
struct BlockageModel {
    std::vector<std::vector<EdgeKey>> units;
    double p = 0.5;

    static BlockageModel independent_edges(std::vector<EdgeKey> edges, double p);
    static BlockageModel atomic_groups(std::vector<std::vector<EdgeKey>> groups, double p);

    BlockageRealization draw(std::uint64_t seed) const;
};

struct BatchParams {
    int num_trials = 100;
    std::uint64_t master_seed = 0;
};

struct BatchSummary {
    int num_trials = 0;
    int failures = 0;
    double mean = 0.0;    // over successful trials
    double stddev = 0.0;  // population std dev over successful trials
    double mean_plan_time_ms = 0.0;  // per planning event, all trials
};

struct BatchResult {
    std::vector<TrialResult> trials;  // index == trial index
    BatchSummary summary;
};

// Per-trial seeds derive from (master_seed, trial_index), so a batch is a
// pure function of its parameters no matter how it is scheduled.
std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index);
BlockageRealization draw_trial_realization(const BlockageModel& model,
                                           std::uint64_t master_seed, int trial_index);
// Sampler seed run_batch hands trial `trial_index`; external tools use it to
// re-run exactly the trial a batch ran.
std::uint64_t trial_agent_seed(std::uint64_t master_seed, int trial_index);
// Seed of the utility tree a reward agent with this sampler seed builds at
// the start of its trial.
std::uint64_t utility_tree_seed(std::uint64_t agent_seed);

// OpenMP batch runner: trials run in parallel, results land in trial order.
// num_threads <= 0 leaves the OpenMP default in place.
BatchResult run_batch(const Graph& g, const VisibilityMap& vis, NodeId src, NodeId dst,
                      const AgentConfig& cfg, const BlockageModel& model,
                      const BatchParams& params, int num_threads = 0);

// Plain serial loop, kept as the reference the parallel runner is tested
// and benchmarked against.
BatchResult run_batch_serial(const Graph& g, const VisibilityMap& vis, NodeId src, NodeId dst,
                             const AgentConfig& cfg, const BlockageModel& model,
                             const BatchParams& params);

BatchSummary summarize(const std::vector<TrialResult>& trials);

}  // namespace vantage
