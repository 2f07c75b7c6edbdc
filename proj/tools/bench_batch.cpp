// Times the OpenMP batch runner against the serial reference on the built-in
// plateau world and verifies that both produce identical per-trial results.
//
//   bench_batch [trials] [p] [lambda]      defaults: 400 0.5 3

#include <cstdio>
#include <cstdlib>
#include <chrono>
#include <vector>

#include <omp.h>

#include "vantage/agent.hpp"
#include "vantage/environments.hpp"

using namespace vantage;
using Clock = std::chrono::steady_clock;

namespace {

bool same_trials(const std::vector<TrialResult>& a, const std::vector<TrialResult>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].success != b[i].success || a[i].total_cost != b[i].total_cost ||
            a[i].replans != b[i].replans || a[i].trajectory != b[i].trajectory) {
            return false;
        }
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    const int trials = argc > 1 ? std::atoi(argv[1]) : 400;
    const double p = argc > 2 ? std::atof(argv[2]) : 0.5;
    const double lambda = argc > 3 ? std::atof(argv[3]) : 3.0;

    const MapBundle m = build_plateau_map();
    const BlockageModel model = BlockageModel::atomic_groups(m.blockage_units, p);
    AgentConfig cfg;
    cfg.kind = AgentKind::RewardMax;
    cfg.lambda = lambda;
    BatchParams params;
    params.num_trials = trials;
    params.master_seed = 42;

    std::printf("%d trials on the built-in map, p=%g, lambda=%g\n\n", trials, p, lambda);

    auto t0 = Clock::now();
    const BatchResult serial =
        run_batch_serial(m.graph, m.vis, m.src, m.dst, cfg, model, params);
    const double serial_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    std::printf("%-10s %10.1f ms   mean %.3f  stddev %.3f\n", "serial", serial_ms,
                serial.summary.mean, serial.summary.stddev);

    const int max_threads = omp_get_max_threads();
    bool all_match = true;
    for (int threads = 1; threads <= max_threads; threads *= 2) {
        t0 = Clock::now();
        const BatchResult parallel =
            run_batch(m.graph, m.vis, m.src, m.dst, cfg, model, params, threads);
        const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        const bool match = same_trials(serial.trials, parallel.trials);
        all_match = all_match && match;
        std::printf("%-2d threads %10.1f ms   speedup %5.2fx   %s\n", threads, ms,
                    serial_ms / ms, match ? "matches serial" : "MISMATCH");
    }
    if (!all_match) {
        std::fprintf(stderr, "\nparallel results diverged from the serial reference\n");
        return 1;
    }
    std::printf("\nall thread counts reproduce the serial reference exactly\n");
    return 0;
}
