// Command-line front end: generate worlds, run experiments, sweep agent
// grids, render trials. Exit codes: 0 success, 1 usage error, 2 world
// generation failure, 3 experiment/render failure.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vantage/agent.hpp"
#include "vantage/environments.hpp"
#include "vantage/experiment.hpp"
#include "vantage/graph_io.hpp"
#include "vantage/render.hpp"
#include "vantage/rng.hpp"

namespace {

using namespace vantage;

constexpr int kExitUsage = 1;
constexpr int kExitGenerate = 2;
constexpr int kExitExperiment = 3;

// Map selection flags shared by generate/sweep/render-on-the-fly.
struct MapFlags {
    std::string preset;
    int grid = 12;
    std::uint64_t seed = 0;
    std::string heightmap;
    std::string ovals;  // "row,col,semi_row,semi_col;..."
    std::string los = "sightline";
};

void add_map_flags(CLI::App* cmd, MapFlags& f) {
    cmd->add_option("--preset", f.preset,
                    "procedural preset: standard, dense, lowblock or six (default: builtin map)");
    cmd->add_option("--grid", f.grid, "procedural grid side (12, 14 or 16)")
        ->capture_default_str();
    cmd->add_option("--seed", f.seed, "procedural generator seed")->capture_default_str();
    cmd->add_option("--heightmap", f.heightmap, "heightmap text file (terrain map)");
    cmd->add_option("--ovals", f.ovals,
                    "oval obstacles as row,col,semi_row,semi_col groups separated by ';'");
    cmd->add_option("--los", f.los, "terrain visibility rule: sightline or threshold")
        ->capture_default_str();
}

std::vector<Oval> parse_ovals(const std::string& text) {
    std::vector<Oval> ovals;
    if (text.empty()) return ovals;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(';', start);
        if (end == std::string::npos) end = text.size();
        const std::string group = text.substr(start, end - start);
        double f[4];
        int consumed = 0;
        if (std::sscanf(group.c_str(), "%lf,%lf,%lf,%lf%n", &f[0], &f[1], &f[2], &f[3],
                        &consumed) != 4 ||
            consumed != static_cast<int>(group.size())) {
            throw CLI::ValidationError("--ovals", "malformed oval group '" + group + "'");
        }
        ovals.push_back(Oval{f[0], f[1], f[2], f[3]});
        start = end + 1;
    }
    return ovals;
}

MapConfig to_map_config(const MapFlags& f) {
    MapConfig mc;
    if (!f.heightmap.empty()) {
        mc.source = MapSource::Terrain;
        mc.heightmap = f.heightmap;
        mc.ovals = parse_ovals(f.ovals);
        if (f.los == "sightline") {
            mc.los = LosRule::InterpolatedSightline;
        } else if (f.los == "threshold") {
            mc.los = LosRule::MaxHeightThreshold;
        } else {
            throw CLI::ValidationError("--los", "expected 'sightline' or 'threshold'");
        }
    } else if (!f.preset.empty()) {
        mc.source = MapSource::Procedural;
        mc.preset = f.preset;
        mc.grid = f.grid;
        mc.seed = f.seed;
    } else {
        mc.source = MapSource::Builtin;
    }
    return mc;
}

// Strict comma-separated doubles; empty lists and empty tokens are errors.
std::vector<double> parse_double_list(const std::string& text, const char* flag) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string::npos) end = text.size();
        const std::string token = text.substr(start, end - start);
        double value = 0.0;
        int consumed = 0;
        if (std::sscanf(token.c_str(), "%lf%n", &value, &consumed) != 1 ||
            consumed != static_cast<int>(token.size())) {
            throw CLI::ValidationError(flag, "malformed number '" + token + "'");
        }
        values.push_back(value);
        start = end + 1;
    }
    if (values.empty()) throw CLI::ValidationError(flag, "needs at least one value");
    return values;
}

// Worker-pool size: explicit flag wins, then VANTAGE_THREADS, then the
// fallback (config-file value or 0 = all cores).
int resolve_threads(int flag_value, bool flag_given, int fallback) {
    if (flag_given) return flag_value;
    if (const char* env = std::getenv("VANTAGE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return fallback;
}

int cmd_generate(const MapFlags& flags, const std::string& out, double block_prob,
                 bool block_prob_given) {
    MapConfig mc;
    try {
        mc = to_map_config(flags);
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitUsage;
    }
    MapBundle m;
    try {
        m = build_map(mc);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "generate failed: %s\n", e.what());
        return kExitGenerate;
    }
    if (block_prob_given) m.default_block_prob = block_prob;
    try {
        save_map_bundle(m, out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "cannot write bundle: %s\n", e.what());
        return kExitGenerate;
    }
    std::printf("%s -> %s\n", describe_map(m).c_str(), out.c_str());
    return 0;
}

int run_and_report(ExperimentConfig cfg) {
    try {
        const ExperimentResult result = run_experiment(cfg);
        std::printf("%s\n", describe_map(result.map).c_str());
        std::fputs(table_text(result.table).c_str(), stdout);
        if (!cfg.output_dir.empty()) std::printf("artifacts in %s\n", cfg.output_dir.c_str());
        return 0;
    } catch (const GeneratorError& e) {
        std::fprintf(stderr, "generate failed: %s\n", e.what());
        return kExitGenerate;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "experiment failed: %s\n", e.what());
        return kExitExperiment;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"plateau/terrain navigation experiments under uncertain blockages"};
    app.require_subcommand(1);

    // --- generate ---------------------------------------------------------
    auto* generate = app.add_subcommand("generate", "build a world and save it as a bundle");
    MapFlags gen_flags;
    add_map_flags(generate, gen_flags);
    std::string gen_out;
    generate->add_option("--out", gen_out, "bundle directory to write")->required();
    double gen_block_prob = 0.5;
    auto* gen_p_opt =
        generate->add_option("--block-prob", gen_block_prob, "default blockage probability");

    // --- run ---------------------------------------------------------------
    auto* run = app.add_subcommand("run", "run the experiment described by a config file");
    std::string run_config;
    run->add_option("--config", run_config, "experiment config (JSON)")->required();
    std::string run_out;
    auto* run_out_opt = run->add_option("--out", run_out, "override the config's output_dir");
    int run_seeds = 0;
    auto* run_seeds_opt = run->add_option("--seeds", run_seeds, "override trials per cell");
    std::uint64_t run_master = 0;
    auto* run_master_opt = run->add_option("--master-seed", run_master, "override the master seed");
    std::string run_probs_str;
    auto* run_probs_opt =
        run->add_option("--probs", run_probs_str, "override blockage probabilities, e.g. 0,0.3,0.5");
    int run_threads = 0;
    auto* run_threads_opt = run->add_option("--threads", run_threads, "worker-pool size (default: VANTAGE_THREADS or all cores)");

    // --- sweep --------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "grid of reward agents x blockage probabilities");
    MapFlags sweep_flags;
    add_map_flags(sweep, sweep_flags);
    std::string sweep_lambdas_str;
    sweep->add_option("--lambdas", sweep_lambdas_str, "observation weights, e.g. 0,3,10")
        ->required();
    bool sweep_sp = true;
    sweep->add_flag("--sp,!--no-sp", sweep_sp, "include the shortest-path baseline")
        ->capture_default_str();
    std::string sweep_probs_str;
    auto* sweep_probs_opt =
        sweep->add_option("--probs", sweep_probs_str, "blockage probabilities (default: map's)");
    int sweep_seeds = 128;
    sweep->add_option("--seeds", sweep_seeds, "trials per cell")->capture_default_str();
    std::uint64_t sweep_master = 42;
    sweep->add_option("--master-seed", sweep_master, "master seed")->capture_default_str();
    std::string sweep_out;
    sweep->add_option("--out", sweep_out, "artifact directory");
    int sweep_threads = 0;
    auto* sweep_threads_opt = sweep->add_option("--threads", sweep_threads, "worker-pool size");

    // --- render --------------------------------------------------------------
    auto* render = app.add_subcommand("render", "draw a bundle (optionally with one trial) as SVG");
    std::string render_map_dir;
    render->add_option("--map", render_map_dir, "bundle directory")->required();
    std::string render_out;
    render->add_option("--out", render_out, "SVG file to write")->required();
    bool render_trial = false;
    render->add_flag("--trial", render_trial, "run one trial and draw it");
    double render_p = -1.0;
    render->add_option("--p", render_p, "trial blockage probability (default: bundle's)");
    int render_seed = 0;
    render->add_option("--trial-seed", render_seed, "trial index under the master seed");
    std::uint64_t render_master = 42;
    render->add_option("--master-seed", render_master, "master seed")->capture_default_str();
    double render_lambda = 3.0;
    render->add_option("--lambda", render_lambda, "reward agent's observation weight")
        ->capture_default_str();
    bool render_sp = false;
    render->add_flag("--sp", render_sp, "use the shortest-path baseline instead");
    bool render_utility = false;
    render->add_flag("--utility", render_utility, "overlay the initial edge-utility heat");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (generate->parsed()) {
        return cmd_generate(gen_flags, gen_out, gen_block_prob, gen_p_opt->count() > 0);
    }

    if (run->parsed()) {
        ExperimentConfig cfg;
        try {
            cfg = config_from_json(read_text_file(run_config));
        } catch (const std::exception& e) {
            std::fprintf(stderr, "%s\n", e.what());
            return kExitUsage;
        }
        if (run_out_opt->count()) cfg.output_dir = run_out;
        if (run_seeds_opt->count()) cfg.seeds = run_seeds;
        if (run_master_opt->count()) cfg.master_seed = run_master;
        if (run_probs_opt->count()) {
            try {
                cfg.block_probs = parse_double_list(run_probs_str, "--probs");
            } catch (const CLI::Error& e) {
                std::fprintf(stderr, "%s\n", e.what());
                return kExitUsage;
            }
        }
        cfg.threads = resolve_threads(run_threads, run_threads_opt->count() > 0, cfg.threads);
        try {
            validate_config(cfg);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "%s\n", e.what());
            return kExitUsage;
        }
        return run_and_report(cfg);
    }

    if (sweep->parsed()) {
        ExperimentConfig cfg;
        std::vector<double> sweep_lambdas;
        bool probs_given = false;
        try {
            sweep_lambdas = parse_double_list(sweep_lambdas_str, "--lambdas");
            if (sweep_probs_opt->count()) {
                cfg.block_probs = parse_double_list(sweep_probs_str, "--probs");
                probs_given = true;
            }
            cfg.map = to_map_config(sweep_flags);
        } catch (const CLI::Error& e) {
            std::fprintf(stderr, "%s\n", e.what());
            return kExitUsage;
        }
        cfg.agents.clear();
        if (sweep_sp) cfg.agents.push_back(shortest_path_agent());
        for (double lambda : sweep_lambdas) cfg.agents.push_back(reward_agent(lambda));
        cfg.seeds = sweep_seeds;
        cfg.master_seed = sweep_master;
        cfg.output_dir = sweep_out;
        cfg.threads = resolve_threads(sweep_threads, sweep_threads_opt->count() > 0, 0);
        if (!probs_given) {
            try {
                cfg.block_probs = {build_map(cfg.map).default_block_prob};
            } catch (const std::exception& e) {
                std::fprintf(stderr, "generate failed: %s\n", e.what());
                return kExitGenerate;
            }
        }
        try {
            validate_config(cfg);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "%s\n", e.what());
            return kExitUsage;
        }
        return run_and_report(cfg);
    }

    // render
    try {
        const MapBundle m = load_map_bundle(render_map_dir);
        RenderOptions opts;
        UtilityMap utility;
        if (render_utility) {
            SamplerParams params;
            params.rng_seed = utility_tree_seed(trial_agent_seed(render_master, render_seed));
            utility = compute_edge_utility(
                sample_short_diverse_paths(m.graph, m.src, m.dst, params));
            opts.utility = &utility;
        }
        std::string svg;
        if (render_trial) {
            const double p = render_p >= 0.0 ? render_p : m.default_block_prob;
            const BlockageModel model = BlockageModel::atomic_groups(m.blockage_units, p);
            AgentConfig agent;
            agent.kind = render_sp ? AgentKind::ShortestPathBaseline : AgentKind::RewardMax;
            agent.lambda = render_lambda;
            agent.sampler.rng_seed = trial_agent_seed(render_master, render_seed);
            const BlockageRealization realization =
                draw_trial_realization(model, render_master, render_seed);
            const TrialResult trial =
                run_trial(m.graph, m.vis, realization, m.src, m.dst, agent);
            svg = render_trial_svg(m, trial, opts);
            std::printf("trial seed %d at p=%s: %s, cost %s, %d replans\n", render_seed,
                        format_double(p).c_str(), trial.success ? "success" : "FAILED",
                        format_double(trial.total_cost).c_str(), trial.replans);
        } else {
            svg = render_map_svg(m, opts);
        }
        write_text_file(render_out, svg);
        std::printf("wrote %s\n", render_out.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "render failed: %s\n", e.what());
        return kExitExperiment;
    }
}
