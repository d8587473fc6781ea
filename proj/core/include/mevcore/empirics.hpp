#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace mevcore {

/// One order-flow-auction target transaction: how many feasible backrun
/// bundles it received and the profit jointly captured by the proposer and
/// the transaction sender.
struct BackrunRecord {
    std::string target_id;
    long backrun_count = 0;
    double profit = 0.0;
};

/// Reads `target_id,backrun_count,profit` rows. Throws std::runtime_error
/// naming the offending line on a missing header, a non-integer or negative
/// count, or a negative or non-numeric profit.
std::vector<BackrunRecord> parse_backrun_csv(std::istream& input);

struct MedianGroup {
    long backrun_count = 0;
    double median_profit = 0.0;
    std::size_t group_size = 0;
};

/// Median profit per distinct backrun count, ascending by count. Even-sized
/// groups take the mean of the two central values.
std::vector<MedianGroup> group_median_profit(const std::vector<BackrunRecord>& records);

struct HistogramBin {
    long lo = 0;
    long hi = 0;  // inclusive
    std::size_t count = 0;
};

/// Backrun-count histogram with fixed-width bins starting at zero; interior
/// empty bins are kept so the bins tile the observed range.
std::vector<HistogramBin> histogram_counts(const std::vector<BackrunRecord>& records,
                                           long bin_width = 5);

struct RegressionResult {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
    std::size_t n_obs = 0;
    double stderr_intercept = 0.0;
    double stderr_slope = 0.0;
};

struct LogMedianFit {
    RegressionResult regression;
    std::size_t dropped_zero_median = 0;  // log needs positive medians
};

struct OlsOptions {
    bool weight_by_group_size = false;
};

/// Ordinary least squares of log median profit on backrun count, one
/// observation per group. Groups with zero median are dropped and counted.
/// Throws when fewer than three usable groups remain or the counts have no
/// variance.
LogMedianFit ols_log_median(const std::vector<MedianGroup>& groups, OlsOptions options = {});

}  // namespace mevcore
