#include "mevcore/bundles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>

namespace mevcore {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

void check_coalition(const BundleMatrix& matrix, std::span<const int> coalition) {
    for (int j : coalition) {
        require(j >= 0 && j < matrix.n, "coalition member outside searcher range");
    }
}

double top_k_sum(std::vector<double> entries, int k) {
    if (k <= 0 || entries.empty()) return 0.0;
    const int take = std::min<int>(k, static_cast<int>(entries.size()));
    std::nth_element(entries.begin(), entries.begin() + (take - 1), entries.end(),
                     std::greater<>());
    double sum = 0.0;
    for (int i = 0; i < take; ++i) sum += entries[i];
    return sum;
}

// Per-opportunity: highest value, second-highest (with multiplicity), and
// the winning column if the maximum is attained by exactly one searcher.
struct ColumnStats {
    double top = 0.0;
    double second = 0.0;
    int unique_argmax = -1;
};

ColumnStats column_stats(const std::vector<double>& row) {
    ColumnStats s;
    double top = -1.0, second = -1.0;
    int arg = -1;
    int top_count = 0;
    for (int j = 0; j < static_cast<int>(row.size()); ++j) {
        const double v = row[j];
        if (v > top) {
            second = top;
            top = v;
            arg = j;
            top_count = 1;
        } else if (v == top) {
            second = top;
            ++top_count;
        } else if (v > second) {
            second = v;
        }
    }
    s.top = row.empty() ? 0.0 : top;
    s.second = row.size() < 2 ? 0.0 : std::max(second, 0.0);
    s.unique_argmax = top_count == 1 ? arg : -1;
    return s;
}

}  // namespace

void check_matrix(const BundleMatrix& matrix) {
    require(matrix.n >= 1, "matrix needs at least one searcher column");
    for (const auto& row : matrix.values) {
        require(static_cast<int>(row.size()) == matrix.n,
                "matrix row width must equal searcher count");
        for (double v : row) {
            require(std::isfinite(v) && v >= 0.0, "matrix entries must be finite and >= 0");
        }
    }
}

double block_value(const BundleMatrix& matrix, std::span<const int> coalition) {
    check_coalition(matrix, coalition);
    double total = 0.0;
    for (const auto& row : matrix.values) {
        double best = 0.0;  // empty coalition extracts nothing
        for (int j : coalition) best = std::max(best, row[j]);
        total += best;
    }
    return total;
}

double second_highest(std::span<const double> column) {
    if (column.size() < 2) return 0.0;
    double top = -std::numeric_limits<double>::infinity();
    double second = top;
    for (double v : column) {
        if (v >= top) {
            second = top;
            top = v;
        } else if (v > second) {
            second = v;
        }
    }
    return second;
}

ValidatorFloor validator_floor(const BundleMatrix& matrix) {
    ValidatorFloor floor;
    floor.per_opportunity.reserve(matrix.values.size());
    for (const auto& row : matrix.values) {
        const double m_i = second_highest(row);
        floor.per_opportunity.push_back(m_i);
        floor.total += m_i;
    }
    return floor;
}

BundleOutcome searcher_optimal_bundle_allocation(const BundleMatrix& matrix) {
    check_matrix(matrix);
    BundleOutcome out;
    out.allocation.searcher_shares.assign(matrix.n, 0.0);
    out.assignment.winner.reserve(matrix.values.size());
    double floor_total = 0.0;
    for (const auto& row : matrix.values) {
        const int winner =
            static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
        const double m_i = second_highest(row);
        out.assignment.winner.push_back(winner);
        out.allocation.searcher_shares[winner] += row[winner] - m_i;
        floor_total += m_i;
    }
    out.allocation.validator_share = floor_total;
    return out;
}

double capacity_block_value(const BundleMatrix& matrix, int capacity,
                            std::span<const int> coalition) {
    require(capacity >= 0, "capacity must be >= 0");
    check_coalition(matrix, coalition);
    std::vector<double> best_per_opportunity;
    best_per_opportunity.reserve(matrix.values.size());
    for (const auto& row : matrix.values) {
        double best = 0.0;
        for (int j : coalition) best = std::max(best, row[j]);
        best_per_opportunity.push_back(best);
    }
    return top_k_sum(std::move(best_per_opportunity), capacity);
}

Allocation capacity_searcher_optimal(const BundleMatrix& matrix, int capacity) {
    require(capacity >= 0, "capacity must be >= 0");
    check_matrix(matrix);
    const int m = matrix.opportunity_count();
    std::vector<ColumnStats> stats;
    stats.reserve(m);
    std::vector<double> tops;
    tops.reserve(m);
    for (const auto& row : matrix.values) {
        stats.push_back(column_stats(row));
        tops.push_back(stats.back().top);
    }
    const double grand = top_k_sum(tops, capacity);

    Allocation x;
    x.searcher_shares.assign(matrix.n, 0.0);
    double share_sum = 0.0;
    std::vector<double> without(m);
    for (int j = 0; j < matrix.n; ++j) {
        // Dropping searcher j only changes opportunities it uniquely tops,
        // where the runner-up value takes over.
        for (int i = 0; i < m; ++i) {
            without[i] = stats[i].unique_argmax == j ? stats[i].second : stats[i].top;
        }
        const double value_without = top_k_sum(without, capacity);
        x.searcher_shares[j] = grand - value_without;
        share_sum += x.searcher_shares[j];
    }
    x.validator_share = grand - share_sum;
    return x;
}

double capacity_floor_sum(const BundleMatrix& matrix, int capacity) {
    require(capacity >= 0, "capacity must be >= 0");
    return top_k_sum(validator_floor(matrix).per_opportunity, capacity);
}

CapacityFloorCheck check_capacity_floor(const BundleMatrix& matrix, int capacity) {
    CapacityFloorCheck check;
    check.floor_sum = capacity_floor_sum(matrix, capacity);
    check.marginal_share = capacity_searcher_optimal(matrix, capacity).validator_share;
    check.consistent = std::abs(check.floor_sum - check.marginal_share) <= kValueTol;
    return check;
}

namespace {

// Walks the winner assignments in block-index order: digit d in [0, n)
// assigns opportunity i to searcher d, digit n leaves it out, opportunity 0
// is the most significant digit. Capacity-violating combinations are
// skipped entirely so feasible assignments map 1:1 onto block indices.
template <typename Fn>
void enumerate_assignments(const BundleMatrix& matrix, std::optional<int> capacity,
                           Fn&& visit) {
    const int m = matrix.opportunity_count();
    const std::uint64_t radix = static_cast<std::uint64_t>(matrix.n) + 1;
    std::uint64_t count = 1;
    for (int i = 0; i < m; ++i) {
        count *= radix;
        if (count > 1000000) {
            throw std::invalid_argument("bundle instance too large to enumerate assignments");
        }
    }
    std::vector<int> digits(m, 0);
    for (std::uint64_t index = 0; index < count; ++index) {
        std::uint64_t rest = index;
        int included = 0;
        for (int i = m - 1; i >= 0; --i) {
            digits[i] = static_cast<int>(rest % radix);
            rest /= radix;
            if (digits[i] < matrix.n) ++included;
        }
        if (capacity && included > *capacity) continue;
        if (!visit(digits)) return;
    }
}

}  // namespace

ExplicitGame to_general_game(const BundleMatrix& matrix, std::optional<int> capacity) {
    check_matrix(matrix);
    require(!capacity || *capacity >= 0, "capacity must be >= 0");
    require(matrix.n <= kMaxSearchers, "too many searchers for the explicit representation");
    ExplicitGame game;
    game.n_searchers = matrix.n;
    enumerate_assignments(matrix, capacity, [&](const std::vector<int>& digits) {
        CandidateBlock block;
        block.searcher_values.assign(matrix.n, 0.0);
        for (int i = 0; i < matrix.opportunity_count(); ++i) {
            if (digits[i] >= matrix.n) continue;
            block.contributors |= Coalition{1} << digits[i];
            block.searcher_values[digits[i]] += matrix.values[i][digits[i]];
        }
        game.blocks.push_back(std::move(block));
        return true;
    });
    return game;
}

OpportunityAssignment assignment_of_block(const BundleMatrix& matrix,
                                          std::optional<int> capacity, int block_index) {
    check_matrix(matrix);
    require(block_index >= 0, "block index out of range");
    OpportunityAssignment assignment;
    int seen = -1;
    enumerate_assignments(matrix, capacity, [&](const std::vector<int>& digits) {
        if (++seen != block_index) return true;
        for (int digit : digits) {
            assignment.winner.push_back(digit < matrix.n ? std::optional<int>(digit)
                                                         : std::nullopt);
        }
        return false;
    });
    require(seen >= block_index, "block index out of range");
    return assignment;
}

}  // namespace mevcore
