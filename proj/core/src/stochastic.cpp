#include "mevcore/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mevcore {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

double freq_se(double freq, int trials) {
    return std::sqrt(freq * (1.0 - freq) / static_cast<double>(trials));
}

Estimate make_estimate(long count, int trials) {
    const double f = static_cast<double>(count) / static_cast<double>(trials);
    return {f, freq_se(f, trials)};
}

// Bisection on a strictly decreasing function until the interval collapses
// to adjacent doubles; transcendental targets converge to machine precision.
template <typename F>
double bisect_decreasing(F f, double lo, double hi, double target) {
    for (;;) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) return mid;
        const double value = f(mid);
        if (value == target) return mid;
        if (value > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

double y_lt2_probability(int n, double p) {
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return n == 1 ? 1.0 : 0.0;
    const double log_1mp = std::log1p(-p);
    const double none = std::exp(n * log_1mp);
    const double one = std::exp(std::log(static_cast<double>(n)) + std::log(p) +
                                (n - 1) * log_1mp);
    return none + one;
}

}  // namespace

SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial) {
    SplitMix64 mixer(seed ^ (trial * 0xD1B54A32D192ED03ULL + 0x2545F4914F6CDD1DULL));
    return SplitMix64(mixer.next_u64());
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return trial_stream(seed ^ 0xA0761D6478BD642FULL, index).next_u64();
}

void check_config(const SimConfig& config) {
    require(config.n >= 1, "need at least one searcher");
    require(config.m >= 0, "opportunity count must be >= 0");
    require(config.p >= 0.0 && config.p <= 1.0, "probability must be in [0, 1]");
    require(config.trials >= 1, "need at least one trial");
    require(!config.capacity || *config.capacity >= 0, "capacity must be >= 0");
}

BundleMatrix sample_matrix(int n, int m, double p, SplitMix64& rng) {
    require(n >= 1 && m >= 0, "invalid matrix shape");
    require(p >= 0.0 && p <= 1.0, "probability must be in [0, 1]");
    BundleMatrix matrix;
    matrix.n = n;
    matrix.values.assign(m, std::vector<double>(n, 0.0));
    for (auto& row : matrix.values) {
        for (double& v : row) v = rng.next_unit() < p ? 1.0 : 0.0;
    }
    return matrix;
}

TrialStats trial_stats(const BundleMatrix& matrix, std::optional<int> capacity) {
    TrialStats stats;
    stats.coverage_counts.reserve(matrix.values.size());
    for (const auto& row : matrix.values) {
        double y = 0.0;
        for (double v : row) y += v;
        stats.coverage_counts.push_back(y);
    }
    std::vector<int> everyone(matrix.n);
    for (int j = 0; j < matrix.n; ++j) everyone[j] = j;
    if (capacity) {
        stats.block_value = capacity_block_value(matrix, *capacity, everyone);
        stats.validator_floor_value =
            capacity_searcher_optimal(matrix, *capacity).validator_share;
    } else {
        stats.block_value = block_value(matrix, everyone);
        stats.validator_floor_value = validator_floor(matrix).total;
    }
    return stats;
}

SimReport run_trials(const SimConfig& config) {
    return run_trials(config, [](int n, int m, double p, SplitMix64& rng) {
        return sample_matrix(n, m, p, rng);
    });
}

SimReport run_trials(const SimConfig& config, const MatrixSampler& sampler) {
    check_config(config);
    long takes_all = 0, covered_twice = 0, singletons = 0, zero = 0;
    long positive = 0, searchers_take_all = 0;
    double block_sum = 0.0, floor_sum = 0.0;

    for (int t = 0; t < config.trials; ++t) {
        SplitMix64 rng = trial_stream(config.seed, static_cast<std::uint64_t>(t));
        const BundleMatrix matrix = sampler(config.n, config.m, config.p, rng);
        const TrialStats stats = trial_stats(matrix, config.capacity);

        if (stats.validator_floor_value == stats.block_value) ++takes_all;
        bool twice = true, single = true;
        for (double y : stats.coverage_counts) {
            twice = twice && y >= 2.0;
            single = single && y == 1.0;
        }
        if (twice) ++covered_twice;
        if (single) ++singletons;
        if (stats.block_value == 0.0) ++zero;
        if (stats.block_value > 0.0) {
            ++positive;
            if (stats.validator_floor_value == 0.0) ++searchers_take_all;
        }
        block_sum += stats.block_value;
        floor_sum += stats.validator_floor_value;
    }

    SimReport report;
    report.trials = config.trials;
    report.validator_takes_all = make_estimate(takes_all, config.trials);
    report.all_covered_twice = make_estimate(covered_twice, config.trials);
    report.all_singletons = make_estimate(singletons, config.trials);
    report.zero_block = make_estimate(zero, config.trials);
    if (positive > 0) {
        report.searchers_take_all_given_positive =
            make_estimate(searchers_take_all, static_cast<int>(positive));
    }
    report.mean_block_value = block_sum / config.trials;
    report.mean_floor = floor_sum / config.trials;
    return report;
}

EventProbabilities exact_event_probabilities(int n, int m, double p) {
    require(n >= 1 && m >= 0, "invalid parameters");
    require(p >= 0.0 && p <= 1.0, "probability must be in [0, 1]");
    EventProbabilities out;
    out.y_lt2 = y_lt2_probability(n, p);
    if (m == 0) {
        out.all_covered_twice = 1.0;
        out.all_singletons = 1.0;
        out.zero_block = 1.0;
        return out;
    }
    // Per-opportunity log-probabilities, then m-fold products via exp.
    const double covered = 1.0 - out.y_lt2;
    out.all_covered_twice = covered <= 0.0 ? 0.0 : std::exp(m * std::log(covered));
    if (p <= 0.0) {
        out.all_singletons = 0.0;
        out.zero_block = 1.0;
    } else if (p >= 1.0) {
        out.all_singletons = n == 1 ? 1.0 : 0.0;
        out.zero_block = 0.0;
    } else {
        const double log_1mp = std::log1p(-p);
        const double log_one =
            std::log(static_cast<double>(n)) + std::log(p) + (n - 1) * log_1mp;
        out.all_singletons = std::exp(m * log_one);
        out.zero_block = std::exp(static_cast<double>(m) * n * log_1mp);
    }
    return out;
}

double calibrate_p(int n, double clash_fraction) {
    require(n >= 2, "calibration needs at least two searchers");
    require(clash_fraction > 0.0 && clash_fraction < 1.0,
            "clash fraction must be in (0, 1)");
    return bisect_decreasing([n](double p) { return y_lt2_probability(n, p); }, 0.0, 1.0,
                             clash_fraction);
}

double solve_phi(double alpha) {
    require(alpha > 0.0 && alpha < 1.0, "alpha must be in (0, 1)");
    const double target = alpha / std::exp(1.0);
    const auto g = [](double phi) { return (1.0 + phi) * std::exp(-phi); };
    double hi = 1.0;
    while (g(hi) > target) hi *= 2.0;
    return bisect_decreasing(g, 0.0, hi, target);
}

std::vector<SweepRow> threshold_sweep(int n, int m, std::vector<double> p_grid, int trials,
                                      std::optional<int> capacity, std::uint64_t seed) {
    require(!p_grid.empty(), "probability grid must not be empty");
    std::sort(p_grid.begin(), p_grid.end());
    std::vector<SweepRow> rows;
    rows.reserve(p_grid.size());
    for (std::size_t r = 0; r < p_grid.size(); ++r) {
        SimConfig config;
        config.n = n;
        config.m = m;
        config.p = p_grid[r];
        config.capacity = capacity;
        config.trials = trials;
        config.seed = derive_seed(seed, r);
        SweepRow row;
        row.p = p_grid[r];
        row.report = run_trials(config);
        row.exact = exact_event_probabilities(n, m, p_grid[r]);
        row.small_m = m < n;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace mevcore
