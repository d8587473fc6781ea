#include "mevcore/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mevcore {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

double block_total(const CandidateBlock& block) {
    return std::accumulate(block.searcher_values.begin(), block.searcher_values.end(),
                           block.validator_value);
}

void require_passive_validator(const ExplicitGame& game) {
    for (const CandidateBlock& block : game.blocks) {
        if (std::abs(block.validator_value) > kValueTol) {
            throw std::invalid_argument(
                "mechanism requires a passive validator (zero validator value on every block)");
        }
    }
}

bool has_contributor(const CandidateBlock& block, int searcher) {
    return (block.contributors >> searcher) & 1u;
}

}  // namespace

int optimal_block(const ExplicitGame& game) {
    require(!game.blocks.empty(), "game has no blocks");
    int best = 0;
    double best_value = block_total(game.blocks[0]);
    for (int b = 1; b < static_cast<int>(game.blocks.size()); ++b) {
        const double value = block_total(game.blocks[b]);
        if (value > best_value) {
            best_value = value;
            best = b;
        }
    }
    return best;
}

PaymentOutcome vcg_payments(const ExplicitGame& game) {
    require_passive_validator(game);
    const int chosen = optimal_block(game);
    const CandidateBlock& block = game.blocks[chosen];
    const double total = block_total(block);
    const Coalition full = game.all_searchers();

    PaymentOutcome outcome;
    outcome.block = chosen;
    outcome.payments.resize(game.n_searchers);
    outcome.utilities.resize(game.n_searchers);
    for (int i = 0; i < game.n_searchers; ++i) {
        const double others_best = coalition_value(game, full & ~(Coalition{1} << i));
        const double others_here = total - block.searcher_values[i];
        outcome.payments[i] = others_best - others_here;
        outcome.utilities[i] = block.searcher_values[i] - outcome.payments[i];
    }
    return outcome;
}

PaymentOutcome payments_for_allocation(const ExplicitGame& game, const Allocation& x) {
    if (!core_membership_bruteforce(game, x)) {
        throw std::invalid_argument("allocation is not in the core");
    }
    const int chosen = optimal_block(game);
    const CandidateBlock& block = game.blocks[chosen];
    PaymentOutcome outcome;
    outcome.block = chosen;
    outcome.payments.resize(game.n_searchers);
    outcome.utilities.resize(game.n_searchers);
    for (int i = 0; i < game.n_searchers; ++i) {
        outcome.payments[i] = block.searcher_values[i] - x.searcher_shares[i];
        outcome.utilities[i] = block.searcher_values[i] - outcome.payments[i];
    }
    return outcome;
}

GspOutcome gsp_bundle_auction(const BundleMatrix& matrix) {
    check_matrix(matrix);
    GspOutcome out;
    out.payments.assign(matrix.n, 0.0);
    out.utilities.assign(matrix.n, 0.0);
    out.assignment.winner.reserve(matrix.values.size());
    for (const auto& row : matrix.values) {
        const int winner =
            static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
        const double price = second_highest(row);
        out.assignment.winner.push_back(winner);
        out.payments[winner] += price;
        out.utilities[winner] += row[winner] - price;
        out.revenue += price;
    }
    return out;
}

namespace {

// Minimum core-consistent payment for the searcher given the realized
// block: what the rest of the searchers could make without it, net of what
// they make here.
double misreport_floor(const ExplicitGame& game, int searcher,
                       const PaymentOutcome& observed) {
    require(searcher >= 0 && searcher < game.n_searchers, "searcher index out of range");
    require(observed.block >= 0 && observed.block < static_cast<int>(game.blocks.size()),
            "observed block index out of range");
    require_passive_validator(game);
    const CandidateBlock& realized = game.blocks[observed.block];
    const Coalition full = game.all_searchers();
    require(std::abs(block_total(realized) - coalition_value(game, full)) <= kValueTol,
            "observed block is not welfare-optimal");
    const double others_here = block_total(realized) - realized.searcher_values[searcher];
    return coalition_value(game, full & ~(Coalition{1} << searcher)) - others_here;
}

}  // namespace

MisreportResult construct_misreport(const ExplicitGame& game, int searcher,
                                    const PaymentOutcome& observed) {
    const double floor = misreport_floor(game, searcher, observed);
    const CandidateBlock& realized = game.blocks[observed.block];
    const double others_here = block_total(realized) - realized.searcher_values[searcher];
    const double payment = observed.payments.at(searcher);

    MisreportResult result;
    result.vcg_floor = floor;
    if (payment <= floor + kValueTol) {
        result.at_floor = true;
        result.modified = game;
        return result;
    }
    require(has_contributor(realized, searcher),
            "searcher does not contribute to the realized block");

    const double target = 0.5 * (floor + payment);

    result.payment_bound = target;
    result.modified = game;
    const double realized_cap = others_here + target;
    for (int b = 0; b < static_cast<int>(game.blocks.size()); ++b) {
        CandidateBlock& block = result.modified.blocks[b];
        if (b == observed.block) {
            block.searcher_values[searcher] = target;
            continue;
        }
        if (!has_contributor(block, searcher)) continue;
        // Cap the reported value at the new value of the realized block and
        // at whatever keeps this block from overtaking it. Exact ties are
        // fine: the realized block stays welfare-optimal either way, and an
        // epsilon margin here would leak into the coalition values and
        // break submodularity at a scale the validator would reject.
        const double others = block_total(block) - block.searcher_values[searcher];
        block.searcher_values[searcher] = std::min(
            {block.searcher_values[searcher], target, realized_cap - others});
    }

    const int realized_after = optimal_block(result.modified);
    if (std::abs(block_total(result.modified.blocks[realized_after]) - realized_cap) >
        kValueTol) {
        throw std::runtime_error(
            "misreport construction could not keep the realized block optimal");
    }
    return result;
}

}  // namespace mevcore
