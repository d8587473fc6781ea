#include "mevcore/empirics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <stdexcept>

namespace mevcore {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": " + what);
}

long parse_count(const std::string& field, std::size_t line_no) {
    long value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        fail_line(line_no, "backrun_count is not an integer: '" + field + "'");
    }
    if (value < 0) fail_line(line_no, "backrun_count must be >= 0");
    return value;
}

double parse_profit(const std::string& field, std::size_t line_no) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
        fail_line(line_no, "profit is not a finite number: '" + field + "'");
    }
    if (value < 0.0) fail_line(line_no, "profit must be >= 0");
    return value;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

double median_of_sorted(const std::vector<double>& sorted) {
    const std::size_t k = sorted.size();
    if (k % 2 == 1) return sorted[k / 2];
    return 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
}

}  // namespace

std::vector<BackrunRecord> parse_backrun_csv(std::istream& input) {
    std::string line;
    if (!std::getline(input, line) || strip_cr(line) != "target_id,backrun_count,profit") {
        throw std::runtime_error("line 1: expected header 'target_id,backrun_count,profit'");
    }
    std::vector<BackrunRecord> records;
    std::size_t line_no = 1;
    while (std::getline(input, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != 3) fail_line(line_no, "expected 3 fields");
        BackrunRecord record;
        record.target_id = fields[0];
        record.backrun_count = parse_count(fields[1], line_no);
        record.profit = parse_profit(fields[2], line_no);
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<MedianGroup> group_median_profit(const std::vector<BackrunRecord>& records) {
    std::map<long, std::vector<double>> by_count;
    for (const BackrunRecord& r : records) by_count[r.backrun_count].push_back(r.profit);
    std::vector<MedianGroup> groups;
    groups.reserve(by_count.size());
    for (auto& [count, profits] : by_count) {
        std::sort(profits.begin(), profits.end());
        groups.push_back({count, median_of_sorted(profits), profits.size()});
    }
    return groups;
}

std::vector<HistogramBin> histogram_counts(const std::vector<BackrunRecord>& records,
                                           long bin_width) {
    if (bin_width < 1) throw std::invalid_argument("bin width must be >= 1");
    if (records.empty()) return {};
    long max_count = 0;
    for (const BackrunRecord& r : records) max_count = std::max(max_count, r.backrun_count);
    std::vector<HistogramBin> bins(static_cast<std::size_t>(max_count / bin_width) + 1);
    for (std::size_t b = 0; b < bins.size(); ++b) {
        bins[b].lo = static_cast<long>(b) * bin_width;
        bins[b].hi = bins[b].lo + bin_width - 1;
    }
    for (const BackrunRecord& r : records) ++bins[r.backrun_count / bin_width].count;
    return bins;
}

LogMedianFit ols_log_median(const std::vector<MedianGroup>& groups, OlsOptions options) {
    LogMedianFit fit;
    std::vector<double> x, y, w;
    for (const MedianGroup& g : groups) {
        if (g.median_profit <= 0.0) {
            ++fit.dropped_zero_median;
            continue;
        }
        x.push_back(static_cast<double>(g.backrun_count));
        y.push_back(std::log(g.median_profit));
        w.push_back(options.weight_by_group_size ? static_cast<double>(g.group_size) : 1.0);
    }
    const std::size_t k = x.size();
    if (k < 3) {
        throw std::invalid_argument("need at least 3 groups with positive medians");
    }

    double w_total = 0.0, x_mean = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        w_total += w[i];
        x_mean += w[i] * x[i];
        y_mean += w[i] * y[i];
    }
    x_mean /= w_total;
    y_mean /= w_total;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double dx = x[i] - x_mean;
        const double dy = y[i] - y_mean;
        sxx += w[i] * dx * dx;
        sxy += w[i] * dx * dy;
        syy += w[i] * dy * dy;
    }
    if (sxx <= 0.0) throw std::invalid_argument("backrun counts have no variance");

    RegressionResult& r = fit.regression;
    r.slope = sxy / sxx;
    r.intercept = y_mean - r.slope * x_mean;
    r.n_obs = k;

    double ssr = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double e = y[i] - (r.intercept + r.slope * x[i]);
        ssr += w[i] * e * e;
    }
    r.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
    const double dof = w_total - 2.0;
    const double sigma2 = dof > 0.0 ? ssr / dof : 0.0;
    r.stderr_slope = std::sqrt(sigma2 / sxx);
    r.stderr_intercept = std::sqrt(sigma2 * (1.0 / w_total + x_mean * x_mean / sxx));
    return fit;
}

}  // namespace mevcore
