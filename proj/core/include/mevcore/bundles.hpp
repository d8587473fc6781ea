#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mevcore/game.hpp"

namespace mevcore {

/// The independent-bundle model: m opportunities, n searchers, and the
/// nonnegative value each searcher extracts from each opportunity. Block
/// value is additive over opportunities and at most one clashing bundle per
/// opportunity can be included.
struct BundleMatrix {
    int n = 0;                                // searchers (columns)
    std::vector<std::vector<double>> values;  // values[i][j]: opportunity i, searcher j

    int opportunity_count() const { return static_cast<int>(values.size()); }
};

// Throws std::invalid_argument on shape or value violations.
void check_matrix(const BundleMatrix& matrix);

/// Which searcher's bundle is included per opportunity; nullopt means the
/// opportunity is left out (e.g. squeezed out by a capacity bound).
struct OpportunityAssignment {
    std::vector<std::optional<int>> winner;
};

/// Per-opportunity second-highest values and their sum. The sum is what the
/// validator is guaranteed at the searcher-optimal core point.
struct ValidatorFloor {
    std::vector<double> per_opportunity;
    double total = 0.0;
};

/// Best block value a coalition can realize: per opportunity, the best
/// coalition member's value (zero for an empty coalition), summed.
double block_value(const BundleMatrix& matrix, std::span<const int> coalition);

/// Second-largest entry counting multiplicity; zero when fewer than two
/// entries. A duplicated maximum is its own runner-up.
double second_highest(std::span<const double> column);

ValidatorFloor validator_floor(const BundleMatrix& matrix);

struct BundleOutcome {
    Allocation allocation;
    OpportunityAssignment assignment;
};

/// The searcher-optimal core point of the unconstrained bundle game: each
/// opportunity goes to its best searcher (ties to the lowest index), who
/// keeps the gap to the runner-up value; the validator collects the floor.
BundleOutcome searcher_optimal_bundle_allocation(const BundleMatrix& matrix);

/// Coalition block value when at most `capacity` opportunities fit in the
/// block: the sum of the capacity many largest per-opportunity maxima.
double capacity_block_value(const BundleMatrix& matrix, int capacity,
                            std::span<const int> coalition);

/// Searcher-optimal point of the capacity-constrained game, computed from
/// marginal contributions of the constrained value function.
Allocation capacity_searcher_optimal(const BundleMatrix& matrix, int capacity);

/// Sum of the `capacity` largest per-opportunity second-highest values.
double capacity_floor_sum(const BundleMatrix& matrix, int capacity);

/// The two candidate validator payoffs under a capacity bound do not always
/// agree; the marginal-contribution share is the one that budget-balances,
/// so disagreement is surfaced rather than papered over.
struct CapacityFloorCheck {
    double floor_sum = 0.0;         // capacity_floor_sum
    double marginal_share = 0.0;    // validator share of capacity_searcher_optimal
    bool consistent = false;
};

CapacityFloorCheck check_capacity_floor(const BundleMatrix& matrix, int capacity);

/// Expand the bundle model into an explicit game: one candidate block per
/// feasible winner assignment (at most one winner per opportunity, at most
/// `capacity` opportunities included when set). Guarded so the block count
/// (n+1)^m stays at or below 10^6.
ExplicitGame to_general_game(const BundleMatrix& matrix,
                             std::optional<int> capacity = std::nullopt);

/// Inverse of the block enumeration: the winner assignment behind a block
/// index of to_general_game(matrix, capacity).
OpportunityAssignment assignment_of_block(const BundleMatrix& matrix,
                                          std::optional<int> capacity, int block_index);

}  // namespace mevcore
