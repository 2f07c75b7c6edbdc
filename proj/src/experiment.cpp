#include "vantage/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "json_util.hpp"
#include "vantage/graph_io.hpp"

namespace vantage {
namespace {

using json = detail::ojson;
using detail::oval_from_json;
using detail::oval_to_json;

std::string source_name(MapSource s) {
    switch (s) {
        case MapSource::Builtin: return "builtin";
        case MapSource::Procedural: return "procedural";
        case MapSource::Terrain: return "terrain";
    }
    throw std::logic_error("unknown map source");
}

MapSource source_from_name(const std::string& name) {
    if (name == "builtin") return MapSource::Builtin;
    if (name == "procedural") return MapSource::Procedural;
    if (name == "terrain") return MapSource::Terrain;
    throw std::runtime_error("config: unknown map source '" + name + "'");
}

std::string los_name(LosRule rule) {
    return rule == LosRule::InterpolatedSightline ? "sightline" : "threshold";
}

LosRule los_from_name(const std::string& name) {
    if (name == "sightline") return LosRule::InterpolatedSightline;
    if (name == "threshold") return LosRule::MaxHeightThreshold;
    throw std::runtime_error("config: unknown los rule '" + name + "'");
}

std::string kind_name(AgentKind kind) {
    return kind == AgentKind::ShortestPathBaseline ? "shortest-path" : "reward-max";
}

AgentKind kind_from_name(const std::string& name) {
    if (name == "shortest-path") return AgentKind::ShortestPathBaseline;
    if (name == "reward-max") return AgentKind::RewardMax;
    throw std::runtime_error("config: unknown agent kind '" + name + "'");
}

std::string default_agent_name(const AgentSpec& a) {
    if (a.kind == AgentKind::ShortestPathBaseline) return "sp";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "l%g", a.lambda);
    return buf;
}

// lambda column: the value for reward agents, empty for the baseline.
std::string lambda_cell(const ResultsRow& row) {
    return row.reward_kind ? format_double(row.lambda) : std::string();
}

void append_csv_row(std::string& out, const ResultsRow& row) {
    const bool all_failed = row.summary.failures == row.summary.num_trials;
    out += row.agent + "," + lambda_cell(row) + "," + format_double(row.p) + "," +
           std::to_string(row.summary.num_trials) + "," + std::to_string(row.summary.failures) +
           "," + (all_failed ? "" : format_double(row.summary.mean)) + "," +
           (all_failed ? "" : format_double(row.summary.stddev)) + "," +
           format_double(row.summary.mean_plan_time_ms) + "\n";
}

}  // namespace

AgentSpec shortest_path_agent() {
    AgentSpec a;
    a.kind = AgentKind::ShortestPathBaseline;
    a.lambda = 0.0;
    a.name = "sp";
    return a;
}

AgentSpec reward_agent(double lambda) {
    AgentSpec a;
    a.kind = AgentKind::RewardMax;
    a.lambda = lambda;
    a.name = default_agent_name(a);
    return a;
}

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("config: ") + e.what());
    }

    ExperimentConfig cfg;
    try {
        if (j.contains("map")) {
            const json& m = j["map"];
            cfg.map.source = source_from_name(m.value("source", "builtin"));
            cfg.map.preset = m.value("preset", cfg.map.preset);
            cfg.map.grid = m.value("grid", cfg.map.grid);
            cfg.map.seed = m.value("seed", cfg.map.seed);
            cfg.map.heightmap = m.value("heightmap", cfg.map.heightmap);
            if (m.contains("ovals")) {
                for (const auto& o : m["ovals"]) cfg.map.ovals.push_back(oval_from_json(o));
            }
            cfg.map.los = los_from_name(m.value("los", los_name(cfg.map.los)));
        }
        if (j.contains("block_probs")) {
            cfg.block_probs = j["block_probs"].get<std::vector<double>>();
        }
        if (j.contains("agents")) {
            for (const auto& a : j["agents"]) {
                AgentSpec spec;
                spec.kind = kind_from_name(a.value("kind", "reward-max"));
                spec.lambda = a.value("lambda", spec.kind == AgentKind::RewardMax ? 3.0 : 0.0);
                spec.name = a.value("name", default_agent_name(spec));
                cfg.agents.push_back(std::move(spec));
            }
        } else {
            cfg.agents = {shortest_path_agent(), reward_agent(0.0), reward_agent(3.0)};
        }
        if (j.contains("sampler")) {
            const json& s = j["sampler"];
            cfg.sampler.branching = s.value("branching", cfg.sampler.branching);
            cfg.sampler.depth = s.value("depth", cfg.sampler.depth);
            cfg.sampler.obstacle_radius = s.value("obstacle_radius", cfg.sampler.obstacle_radius);
        }
        cfg.seeds = j.value("seeds", cfg.seeds);
        cfg.master_seed = j.value("master_seed", cfg.master_seed);
        cfg.threads = j.value("threads", cfg.threads);
        cfg.output_dir = j.value("output_dir", cfg.output_dir);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("config: ") + e.what());
    }
    return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json map;
    map["source"] = source_name(cfg.map.source);
    if (cfg.map.source == MapSource::Procedural) {
        map["preset"] = cfg.map.preset;
        map["grid"] = cfg.map.grid;
        map["seed"] = cfg.map.seed;
    } else if (cfg.map.source == MapSource::Terrain) {
        map["heightmap"] = cfg.map.heightmap;
        json ovals = json::array();
        for (const Oval& o : cfg.map.ovals) ovals.push_back(oval_to_json(o));
        map["ovals"] = ovals;
        map["los"] = los_name(cfg.map.los);
    }

    json agents = json::array();
    for (const AgentSpec& a : cfg.agents) {
        json spec;
        spec["name"] = a.name.empty() ? default_agent_name(a) : a.name;
        spec["kind"] = kind_name(a.kind);
        if (a.kind == AgentKind::RewardMax) spec["lambda"] = a.lambda;
        agents.push_back(std::move(spec));
    }

    json j;
    j["map"] = std::move(map);
    j["block_probs"] = cfg.block_probs;
    j["agents"] = std::move(agents);
    j["sampler"] = json{{"branching", cfg.sampler.branching},
                        {"depth", cfg.sampler.depth},
                        {"obstacle_radius", cfg.sampler.obstacle_radius}};
    j["seeds"] = cfg.seeds;
    j["master_seed"] = cfg.master_seed;
    j["threads"] = cfg.threads;
    j["output_dir"] = cfg.output_dir;
    return j.dump(2) + "\n";
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.seeds < 1) throw std::runtime_error("config: seeds must be at least 1");
    if (cfg.threads < 0) throw std::runtime_error("config: threads must be >= 0");
    if (cfg.block_probs.empty()) {
        throw std::runtime_error("config: block_probs must list at least one probability");
    }
    for (double p : cfg.block_probs) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::runtime_error("config: block probability " + format_double(p) +
                                     " outside [0, 1]");
        }
    }
    if (cfg.agents.empty()) throw std::runtime_error("config: agents must list at least one agent");
    std::vector<std::string> names;
    for (const AgentSpec& a : cfg.agents) {
        const std::string name = a.name.empty() ? default_agent_name(a) : a.name;
        if (std::find(names.begin(), names.end(), name) != names.end()) {
            throw std::runtime_error("config: duplicate agent name '" + name + "'");
        }
        names.push_back(name);
        if (a.kind == AgentKind::RewardMax && !(std::isfinite(a.lambda) && a.lambda >= 0.0)) {
            throw std::runtime_error("config: lambda must be finite and non-negative");
        }
    }
    if (cfg.sampler.branching < 1) throw std::runtime_error("config: sampler branching must be >= 1");
    if (cfg.sampler.depth < 0) throw std::runtime_error("config: sampler depth must be >= 0");
    if (cfg.sampler.obstacle_radius < 0) {
        throw std::runtime_error("config: sampler obstacle_radius must be >= 0");
    }
    if (cfg.map.source == MapSource::Terrain && cfg.map.heightmap.empty()) {
        throw std::runtime_error("config: terrain map needs a heightmap path");
    }
}

MapBundle build_map(const MapConfig& map) {
    switch (map.source) {
        case MapSource::Builtin: return build_plateau_map();
        case MapSource::Procedural:
            return generate_procedural_plateau(preset_by_name(map.preset, map.grid, map.seed));
        case MapSource::Terrain:
            return build_terrain_map(load_heightmap(map.heightmap), map.ovals, map.los);
    }
    throw std::logic_error("unknown map source");
}

std::string table_text(const ResultsTable& t) {
    std::string out = "agent        p   runs  fail       mean     stddev    plan_ms\n";
    char buf[160];
    for (const ResultsRow& row : t.rows) {
        const bool all_failed = row.summary.failures == row.summary.num_trials;
        char mean[32] = "-";
        char stddev[32] = "-";
        if (!all_failed) {
            std::snprintf(mean, sizeof(mean), "%.3f", row.summary.mean);
            std::snprintf(stddev, sizeof(stddev), "%.3f", row.summary.stddev);
        }
        std::snprintf(buf, sizeof(buf), "%-8s %5s %6d %5d %10s %10s %10.3f%s\n", row.agent.c_str(),
                      format_double(row.p).c_str(), row.summary.num_trials, row.summary.failures,
                      mean, stddev, row.summary.mean_plan_time_ms,
                      all_failed ? "  (all failed)" : "");
        out += buf;
    }
    return out;
}

std::string table_csv(const ResultsTable& t) {
    std::string out = "agent,lambda,p,runs,failures,mean,stddev,mean_plan_ms\n";
    for (const ResultsRow& row : t.rows) append_csv_row(out, row);
    return out;
}

std::string trials_csv(const ExperimentConfig& cfg, const ExperimentResult& result) {
    (void)cfg;
    std::string out = "agent,lambda,p,seed,cost,success,replans\n";
    for (std::size_t r = 0; r < result.table.rows.size(); ++r) {
        const ResultsRow& row = result.table.rows[r];
        const std::string prefix = row.agent + "," + lambda_cell(row) + "," + format_double(row.p);
        const auto& trials = result.trials[r];
        for (std::size_t i = 0; i < trials.size(); ++i) {
            const TrialResult& t = trials[i];
            out += prefix + "," + std::to_string(i) + "," + format_double(t.total_cost) + "," +
                   (t.success ? "1" : "0") + "," + std::to_string(t.replans) + "\n";
        }
    }
    return out;
}

std::string timing_csv(const ExperimentConfig& cfg, const ExperimentResult& result) {
    (void)cfg;
    std::string out = "agent,lambda,p,seed,plan_count,plan_time_ms\n";
    char buf[32];
    for (std::size_t r = 0; r < result.table.rows.size(); ++r) {
        const ResultsRow& row = result.table.rows[r];
        const std::string prefix = row.agent + "," + lambda_cell(row) + "," + format_double(row.p);
        const auto& trials = result.trials[r];
        for (std::size_t i = 0; i < trials.size(); ++i) {
            const TrialResult& t = trials[i];
            std::snprintf(buf, sizeof(buf), "%.3f", t.plan_time_ms);
            out += prefix + "," + std::to_string(i) + "," + std::to_string(t.plan_count) + "," +
                   buf + "\n";
        }
    }
    return out;
}

std::string trajectories_jsonl(const ExperimentConfig& cfg, const ExperimentResult& result) {
    (void)cfg;
    std::string out;
    for (std::size_t r = 0; r < result.table.rows.size(); ++r) {
        const ResultsRow& row = result.table.rows[r];
        const auto& trials = result.trials[r];
        for (std::size_t i = 0; i < trials.size(); ++i) {
            const TrialResult& t = trials[i];
            json line;
            line["agent"] = row.agent;
            line["p"] = row.p;
            line["seed"] = i;
            line["success"] = t.success;
            line["cost"] = t.total_cost;
            line["replans"] = t.replans;
            line["initial_plan"] = t.initial_plan;
            line["trajectory"] = t.trajectory;
            out += line.dump() + "\n";
        }
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& input) {
    ExperimentConfig cfg = input;
    for (AgentSpec& a : cfg.agents) {
        if (a.name.empty()) a.name = default_agent_name(a);
    }
    validate_config(cfg);

    ExperimentResult result;
    result.map = build_map(cfg.map);

    for (const AgentSpec& agent : cfg.agents) {
        AgentConfig ac;
        ac.kind = agent.kind;
        ac.lambda = agent.lambda;
        ac.sampler = cfg.sampler;
        for (double p : cfg.block_probs) {
            const BlockageModel model = BlockageModel::atomic_groups(result.map.blockage_units, p);
            BatchParams params;
            params.num_trials = cfg.seeds;
            params.master_seed = cfg.master_seed;
            BatchResult batch = run_batch(result.map.graph, result.map.vis, result.map.src,
                                          result.map.dst, ac, model, params, cfg.threads);
            ResultsRow row;
            row.agent = agent.name;
            row.reward_kind = agent.kind == AgentKind::RewardMax;
            row.lambda = agent.lambda;
            row.p = p;
            row.summary = batch.summary;
            result.table.rows.push_back(std::move(row));
            result.trials.push_back(std::move(batch.trials));
        }
    }

    if (!cfg.output_dir.empty()) {
        const std::string dir = cfg.output_dir;
        std::filesystem::create_directories(dir);
        write_text_file(dir + "/config.json", config_to_json(cfg));
        save_map_bundle(result.map, dir + "/map");
        write_text_file(dir + "/trials.csv", trials_csv(cfg, result));
        write_text_file(dir + "/timing.csv", timing_csv(cfg, result));
        write_text_file(dir + "/table.txt", table_text(result.table));
        write_text_file(dir + "/table.csv", table_csv(result.table));
        write_text_file(dir + "/trajectories.jsonl", trajectories_jsonl(cfg, result));
    }
    return result;
}

}  // namespace vantage
