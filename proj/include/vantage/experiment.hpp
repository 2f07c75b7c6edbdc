#pragma once

#include <string>
#include <vector>

#include "vantage/agent.hpp"
#include "vantage/environments.hpp"

namespace vantage {

enum class MapSource { Builtin, Procedural, Terrain };

// Which world an experiment runs on. Procedural fields apply when
// source == Procedural, heightmap fields when source == Terrain.
struct MapConfig {
    MapSource source = MapSource::Builtin;
    std::string preset = "standard";
    int grid = 12;
    std::uint64_t seed = 0;
    std::string heightmap;  // path to a heightmap text file
    std::vector<Oval> ovals;
    LosRule los = LosRule::InterpolatedSightline;
};

struct AgentSpec {
    std::string name;  // column label; defaulted from kind/lambda when empty
    AgentKind kind = AgentKind::RewardMax;
    double lambda = 3.0;
};

AgentSpec shortest_path_agent();
AgentSpec reward_agent(double lambda);

// One experiment: a map, a grid of (agent x blockage probability) cells,
// and a seeded batch of trials per cell. Serializes to JSON and back
// losslessly; see docs/formats.md for the schema.
struct ExperimentConfig {
    MapConfig map;
    std::vector<double> block_probs = {0.5};
    std::vector<AgentSpec> agents;
    SamplerParams sampler;  // rng_seed is ignored; trials derive their own
    int seeds = 128;
    std::uint64_t master_seed = 42;
    int threads = 0;         // 0: one worker per core
    std::string output_dir;  // empty: compute only, write nothing

    // Trials whose plateau/terrain worlds come from this config are
    // reproducible: identical config + master_seed => identical results,
    // regardless of thread count.
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);

// Throws std::runtime_error naming the first invalid field.
void validate_config(const ExperimentConfig& cfg);

// Resolves a MapConfig to a concrete world (may throw GeneratorError or
// file/parse errors for terrain sources).
MapBundle build_map(const MapConfig& map);

// One (agent, p) cell of the results grid.
struct ResultsRow {
    std::string agent;
    bool reward_kind = false;
    double lambda = 0.0;  // meaningful when reward_kind
    double p = 0.0;
    BatchSummary summary;  // mean/stddev over successes; population stddev
};

struct ResultsTable {
    std::vector<ResultsRow> rows;
};

// Fixed-width human table; cells where every trial failed show "-" for the
// cost statistics and are marked "all failed".
std::string table_text(const ResultsTable& t);
std::string table_csv(const ResultsTable& t);

struct ExperimentResult {
    MapBundle map;
    ResultsTable table;
    std::vector<std::vector<TrialResult>> trials;  // parallel to table.rows
};

// Deterministic per-trial records (no wall-clock columns), byte-identical
// for a given config whatever the worker-pool size. Columns documented in
// docs/formats.md.
std::string trials_csv(const ExperimentConfig& cfg, const ExperimentResult& result);
// Wall-clock planning cost per trial; varies run to run by nature.
std::string timing_csv(const ExperimentConfig& cfg, const ExperimentResult& result);
// One JSON object per line: full trajectory and initial plan per trial.
std::string trajectories_jsonl(const ExperimentConfig& cfg, const ExperimentResult& result);

// Runs every (agent, p) cell. When cfg.output_dir is set, writes
// config.json, map/, trials.csv, timing.csv, table.txt, table.csv and
// trajectories.jsonl into it.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace vantage
