#include <benchmark/benchmark.h>

#include <vector>

#include "mevcore/bundles.hpp"
#include "mevcore/game.hpp"
#include "mevcore/mechanisms.hpp"
#include "mevcore/stochastic.hpp"

using namespace mevcore;

namespace {

BundleMatrix fixed_matrix(int m, int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    BundleMatrix matrix;
    matrix.n = n;
    matrix.values.assign(m, std::vector<double>(n, 0.0));
    for (auto& row : matrix.values) {
        for (double& v : row) v = static_cast<double>(rng.next_u64() % 100) / 4.0;
    }
    return matrix;
}

void BM_CoalitionValueTable(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ExplicitGame game = to_general_game(fixed_matrix(4, n, 1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(coalition_value_table(game));
    }
}
BENCHMARK(BM_CoalitionValueTable)->Arg(4)->Arg(6)->Arg(8);

void BM_CoreMembershipBruteforce(benchmark::State& state) {
    const ExplicitGame game = to_general_game(fixed_matrix(4, 6, 2));
    const CoalitionTable table = coalition_value_table(game);
    const Allocation x = searcher_optimal_allocation(game);
    for (auto _ : state) {
        benchmark::DoNotOptimize(core_membership_bruteforce(table, x));
    }
}
BENCHMARK(BM_CoreMembershipBruteforce);

void BM_ValidateGame(benchmark::State& state) {
    const ExplicitGame game = to_general_game(fixed_matrix(4, 8, 3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(validate_game(game));
    }
}
BENCHMARK(BM_ValidateGame);

void BM_BundleAllocation(benchmark::State& state) {
    const BundleMatrix matrix =
        fixed_matrix(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(searcher_optimal_bundle_allocation(matrix));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_BundleAllocation)->Args({50, 200})->Args({200, 1000});

void BM_CapacitySearcherOptimal(benchmark::State& state) {
    const BundleMatrix matrix = fixed_matrix(50, 200, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(capacity_searcher_optimal(matrix, 25));
    }
}
BENCHMARK(BM_CapacitySearcherOptimal);

void BM_GspAuction(benchmark::State& state) {
    const BundleMatrix matrix = fixed_matrix(200, 1000, 6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gsp_bundle_auction(matrix));
    }
}
BENCHMARK(BM_GspAuction);

void BM_RunTrials(benchmark::State& state) {
    SimConfig config;
    config.n = 200;
    config.m = 50;
    config.p = 0.05;
    config.trials = static_cast<int>(state.range(0));
    config.seed = 7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_trials(config));
    }
    state.SetItemsProcessed(state.iterations() * config.trials);
}
BENCHMARK(BM_RunTrials)->Arg(100)->Arg(1000);

void BM_ExactProbabilities(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_event_probabilities(100000, 500, 1e-4));
    }
}
BENCHMARK(BM_ExactProbabilities);

void BM_CalibrateP(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(calibrate_p(125, 2.0 / 3.0));
    }
}
BENCHMARK(BM_CalibrateP);

void BM_SolvePhi(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_phi(0.5));
    }
}
BENCHMARK(BM_SolvePhi);

}  // namespace

BENCHMARK_MAIN();
