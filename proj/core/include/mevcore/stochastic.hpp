#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mevcore/bundles.hpp"

namespace mevcore {

/// Deterministic 64-bit stream generator. Cheap to seed, so every Monte
/// Carlo trial gets its own stream derived from (seed, trial index) and the
/// trial order never matters.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Independent stream for one trial of one experiment.
SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial);

/// Stable derived seed for sub-experiments (e.g. one sweep row each).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct SimConfig {
    int n = 1;        // searchers
    int m = 0;        // opportunities
    double p = 0.0;   // per-(opportunity, searcher) success probability
    std::optional<int> capacity;
    int trials = 1;
    std::uint64_t seed = 0;
};

void check_config(const SimConfig& config);

/// One draw of the competition model: entry (i, j) is 1 with probability p,
/// independently across searchers and opportunities.
BundleMatrix sample_matrix(int n, int m, double p, SplitMix64& rng);

/// Per-trial summary: how many searchers found each opportunity, the block
/// value, and the validator's share at the searcher-optimal core point
/// (capacity-constrained when a capacity is given).
struct TrialStats {
    std::vector<double> coverage_counts;
    double block_value = 0.0;
    double validator_floor_value = 0.0;
};

TrialStats trial_stats(const BundleMatrix& matrix, std::optional<int> capacity);

struct Estimate {
    double freq = 0.0;
    double se = 0.0;  // binomial standard error sqrt(f(1-f)/trials)
};

struct SimReport {
    Estimate validator_takes_all;   // floor equals block value
    Estimate all_covered_twice;     // every opportunity found by >= 2 searchers
    Estimate all_singletons;        // every opportunity found by exactly 1
    Estimate zero_block;            // nothing found at all
    // Among trials with positive block value, how often searchers keep
    // everything; absent when no trial had positive value.
    std::optional<Estimate> searchers_take_all_given_positive;
    double mean_block_value = 0.0;
    double mean_floor = 0.0;
    int trials = 0;
};

using MatrixSampler = std::function<BundleMatrix(int n, int m, double p, SplitMix64&)>;

SimReport run_trials(const SimConfig& config);
SimReport run_trials(const SimConfig& config, const MatrixSampler& sampler);

/// Closed-form counterparts of the simulated frequencies, evaluated in log
/// space so large n and m do not underflow.
struct EventProbabilities {
    double y_lt2 = 0.0;              // one opportunity found by fewer than 2
    double all_covered_twice = 0.0;  // (1 - y_lt2)^m
    double all_singletons = 0.0;     // (n p (1-p)^(n-1))^m
    double zero_block = 0.0;         // (1-p)^(n m)
};

EventProbabilities exact_event_probabilities(int n, int m, double p);

/// Invert q = P[Y < 2] for p given the searcher count: the success
/// probability at which a target clash fraction is observed. Strictly
/// decreasing in p, solved by bisection to machine precision. Requires
/// n >= 2 and q in (0, 1).
double calibrate_p(int n, double clash_fraction);

/// Root of (1 + phi) e^(-phi) = alpha / e on phi > 0: the coefficient of
/// the 1/n probability threshold above which a block with capacity for a
/// (1 - alpha) fraction of the opportunities is fully captured by the
/// validator. Decreasing in alpha; requires alpha in (0, 1).
double solve_phi(double alpha);

struct SweepRow {
    double p = 0.0;
    SimReport report;
    EventProbabilities exact;
    bool small_m = false;  // m < n, the regime the threshold analysis covers
};

/// One simulation per grid point, sorted by p, with the exact probabilities
/// alongside. Row r uses derive_seed(seed, r) so the grid layout does not
/// leak randomness across rows.
std::vector<SweepRow> threshold_sweep(int n, int m, std::vector<double> p_grid, int trials,
                                      std::optional<int> capacity, std::uint64_t seed);

}  // namespace mevcore
