// Serial vs OpenMP particle evaluation on the H-beam fitness.
// Usage: femsel_bench [iterations] [repeats]

#include "femsel/runner.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>

using namespace femsel;

namespace {

double time_run(const ExperimentConfig& config, RunRecord& out) {
    const auto start = std::chrono::steady_clock::now();
    out = execute_experiment(config);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
    const int iterations = argc > 1 ? std::atoi(argv[1]) : 50;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
    if (iterations < 1 || repeats < 1) {
        std::fprintf(stderr, "usage: femsel_bench [iterations>=1] [repeats>=1]\n");
        return 2;
    }

    ExperimentConfig config = preset_config(3, 1, "unused");
    config.swarm.n_iterations = iterations;

    std::printf("threads available: %d, iterations: %d, repeats: %d\n", omp_get_max_threads(), iterations, repeats);
    double best[2] = {1e300, 1e300};
    RunRecord rec[2];
    const Execution modes[2] = {Execution::serial, Execution::parallel};
    for (int r = 0; r < repeats; ++r) {
        for (int k = 0; k < 2; ++k) {
            config.execution = modes[k];
            best[k] = std::min(best[k], time_run(config, rec[k]));
        }
    }
    const double evals = 8.0 * (iterations + 1);
    std::printf("serial:   %.3f s  (%.3f ms/eval)\n", best[0], 1e3 * best[0] / evals);
    std::printf("parallel: %.3f s  (%.3f ms/eval)\n", best[1], 1e3 * best[1] / evals);
    std::printf("speedup:  %.2fx\n", best[0] / best[1]);

    const bool same = rec[0].swarm.final_state.gbest_fitness == rec[1].swarm.final_state.gbest_fitness &&
                      rec[0].swarm.final_state.gbest_position == rec[1].swarm.final_state.gbest_position;
    std::printf("results identical: %s\n", same ? "yes" : "NO");
    return same ? 0 : 1;
}
