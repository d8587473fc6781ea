#pragma once

#include <vector>

#include "mevcore/bundles.hpp"
#include "mevcore/game.hpp"

namespace mevcore {

/// A settled auction: the realized block, what each searcher pays the
/// validator, and the utilities (block value minus payment) left to them.
struct PaymentOutcome {
    int block = 0;
    std::vector<double> payments;
    std::vector<double> utilities;
};

/// Index of the welfare-maximizing block (total searcher value plus
/// validator value); ties go to the lowest index.
int optimal_block(const ExplicitGame& game);

/// VCG payments for a passive validator: each searcher pays the value the
/// others lose from its presence. Utilities come out at the marginal
/// contributions, i.e. the searcher-optimal core point. Refuses games where
/// any block carries validator value.
PaymentOutcome vcg_payments(const ExplicitGame& game);

/// Payments that implement a given core allocation by realizing the optimal
/// block and charging each searcher its block value minus its share.
/// Refuses allocations that fail the brute-force core check.
PaymentOutcome payments_for_allocation(const ExplicitGame& game, const Allocation& x);

/// Per-opportunity second-price auction over bundles: the best searcher
/// wins (ties to the lowest index) and pays the runner-up value.
struct GspOutcome {
    OpportunityAssignment assignment;
    std::vector<double> payments;
    std::vector<double> utilities;
    double revenue = 0.0;
};

GspOutcome gsp_bundle_auction(const BundleMatrix& matrix);

/// A profitable misreport for a searcher charged strictly above its VCG
/// floor: the searcher re-reports its value on the realized block at the
/// midpoint between floor and observed payment and caps its value on its
/// other blocks so the realized block stays welfare-optimal. Any
/// core-consistent payment on the modified game is then at most
/// payment_bound, strictly below the observed payment.
struct MisreportResult {
    bool at_floor = false;       // no profitable misreport exists
    double vcg_floor = 0.0;      // minimum core-consistent payment
    double payment_bound = 0.0;  // reported value on the realized block
    ExplicitGame modified;       // game with the misreported values
};

MisreportResult construct_misreport(const ExplicitGame& game, int searcher,
                                    const PaymentOutcome& observed);

/// Bundle-space misreport: the searcher's winning per-opportunity values are
/// pulled toward the runner-up values (and, under a capacity bound, no lower
/// than the best left-out opportunity) so the reported instance is itself a
/// bundle game, hence submodular, while the realized block stays
/// welfare-optimal and the reported value there lands strictly between the
/// floor and the observed payment. The block-level construction above cannot
/// promise submodularity: capping the value of whole blocks lets coalitions
/// cherry-pick which opportunities the searcher covers. When a capacity
/// bound leaves no room in the column space this falls back to the
/// block-level shape.
struct BundleMisreport {
    MisreportResult result;
    BundleMatrix reported;               // matrix with the searcher's column reduced
    bool used_column_reduction = false;  // false: block-level fallback
};

BundleMisreport construct_misreport(const BundleMatrix& matrix, std::optional<int> capacity,
                                    int searcher, const PaymentOutcome& observed);

}  // namespace mevcore
