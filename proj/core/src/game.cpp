#include "mevcore/game.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mevcore {

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}

bool subset_of(Coalition a, Coalition b) { return (a & ~b) == 0; }

double member_value_sum(const CandidateBlock& block, Coalition coalition) {
    double sum = 0.0;
    for (Coalition rest = coalition; rest != 0; rest &= rest - 1) {
        sum += block.searcher_values[std::countr_zero(rest)];
    }
    return sum;
}

}  // namespace

Coalition coalition_of(const std::vector<int>& members) {
    Coalition c = 0;
    for (int i : members) {
        require(i >= 0 && i < kMaxSearchers, "searcher index out of range");
        c |= Coalition{1} << i;
    }
    return c;
}

std::vector<int> coalition_members(Coalition coalition) {
    std::vector<int> out;
    for (Coalition rest = coalition; rest != 0; rest &= rest - 1) {
        out.push_back(std::countr_zero(rest));
    }
    return out;
}

void check_game(const ExplicitGame& game) {
    require(game.n_searchers >= 1, "game needs at least one searcher");
    require(game.n_searchers <= kMaxSearchers, "too many searchers for mask representation");
    bool has_empty = false;
    for (const CandidateBlock& block : game.blocks) {
        require(subset_of(block.contributors, game.all_searchers()),
                "block contributor outside searcher range");
        require(static_cast<int>(block.searcher_values.size()) == game.n_searchers,
                "searcher_values length must equal searcher count");
        require(std::isfinite(block.validator_value), "non-finite validator value");
        bool all_zero = block.validator_value == 0.0;
        for (double v : block.searcher_values) {
            require(std::isfinite(v), "non-finite searcher value");
            all_zero = all_zero && v == 0.0;
        }
        if (block.contributors == 0 && all_zero) has_empty = true;
    }
    require(has_empty, "game must contain the empty block");
}

double Allocation::total() const {
    return std::accumulate(searcher_shares.begin(), searcher_shares.end(), validator_share);
}

double coalition_value(const ExplicitGame& game, Coalition coalition) {
    require(subset_of(coalition, game.all_searchers()), "coalition outside searcher range");
    double best = -std::numeric_limits<double>::infinity();
    for (const CandidateBlock& block : game.blocks) {
        if (!subset_of(block.contributors, coalition)) continue;
        best = std::max(best, block.validator_value + member_value_sum(block, coalition));
    }
    if (!std::isfinite(best)) {
        throw std::logic_error("no feasible block for coalition; empty block missing");
    }
    return best;
}

double marginal_contribution(const ExplicitGame& game, int searcher) {
    require(searcher >= 0 && searcher < game.n_searchers, "searcher index out of range");
    Coalition full = game.all_searchers();
    return coalition_value(game, full) - coalition_value(game, full & ~(Coalition{1} << searcher));
}

CoalitionTable coalition_value_table(const ExplicitGame& game) {
    require(game.n_searchers <= 20, "game too large for coalition enumeration (n <= 20)");
    const std::size_t size = std::size_t{1} << game.n_searchers;
    CoalitionTable table;
    table.n_searchers = game.n_searchers;
    table.values.assign(size, -std::numeric_limits<double>::infinity());

    // One pass per block: subset-sum of the block's searcher values via the
    // lowest-bit recurrence, then a max-update over the feasible coalitions.
    std::vector<double> sums(size);
    for (const CandidateBlock& block : game.blocks) {
        sums[0] = 0.0;
        for (std::size_t c = 1; c < size; ++c) {
            const std::size_t low = c & (~c + 1);
            sums[c] = sums[c ^ low] + block.searcher_values[std::countr_zero(low)];
        }
        const Coalition mask = block.contributors;
        const Coalition full = table.full();
        for (Coalition c = mask;; c = (c + 1) | mask) {
            table.values[c] = std::max(table.values[c], block.validator_value + sums[c]);
            if (c == full) break;
        }
    }
    for (double v : table.values) {
        if (!std::isfinite(v)) {
            throw std::logic_error("no feasible block for some coalition; empty block missing");
        }
    }
    return table;
}

namespace {

void check_allocation_shape(int n, const Allocation& x) {
    require(static_cast<int>(x.searcher_shares.size()) == n,
            "allocation share count must equal searcher count");
}

// Sum of shares per coalition, filled by the lowest-bit recurrence.
std::vector<double> share_sums(const Allocation& x, int n) {
    const std::size_t size = std::size_t{1} << n;
    std::vector<double> sums(size);
    sums[0] = 0.0;
    for (std::size_t c = 1; c < size; ++c) {
        const std::size_t low = c & (~c + 1);
        sums[c] = sums[c ^ low] + x.searcher_shares[std::countr_zero(low)];
    }
    return sums;
}

}  // namespace

bool core_membership_bruteforce(const CoalitionTable& table, const Allocation& x) {
    check_allocation_shape(table.n_searchers, x);
    const std::vector<double> sums = share_sums(x, table.n_searchers);
    const Coalition full = table.full();
    // Budget balance: everything is distributed.
    if (std::abs(sums[full] + x.validator_share - table.at(full)) > kValueTol) return false;
    for (std::size_t c = 0; c < sums.size(); ++c) {
        // Coalition without the validator generates nothing.
        if (sums[c] < -kValueTol) return false;
        // Coalition with the validator can realize its best block.
        if (sums[c] + x.validator_share < table.values[c] - kValueTol) return false;
    }
    return true;
}

bool core_membership_bruteforce(const ExplicitGame& game, const Allocation& x) {
    return core_membership_bruteforce(coalition_value_table(game), x);
}

bool core_membership_characterization(const CoalitionTable& table, const Allocation& x) {
    check_allocation_shape(table.n_searchers, x);
    const Coalition full = table.full();
    const double grand = table.at(full);
    double share_sum = 0.0;
    for (int i = 0; i < table.n_searchers; ++i) {
        const double share = x.searcher_shares[i];
        const double marginal = grand - table.at(full & ~(Coalition{1} << i));
        if (share < -kValueTol || share > marginal + kValueTol) return false;
        share_sum += share;
    }
    return std::abs(x.validator_share - (grand - share_sum)) <= kValueTol;
}

bool core_membership_characterization(const ExplicitGame& game, const Allocation& x) {
    if (!validate_game(game).is_submodular) {
        throw std::invalid_argument(
            "core characterization requires a submodular game; use the brute-force check");
    }
    return core_membership_characterization(coalition_value_table(game), x);
}

GameDiagnostics validate_game(const ExplicitGame& game) {
    require(game.n_searchers <= 12, "game too large for exact validation (n <= 12)");
    const CoalitionTable table = coalition_value_table(game);
    const std::size_t size = table.values.size();
    const Coalition full = table.full();

    GameDiagnostics diag;
    diag.is_monotone = true;
    diag.is_submodular = true;
    diag.decreasing_marginal_value = true;
    auto report = [&diag](GameViolation v) {
        if (diag.violations.size() < 10) diag.violations.push_back(v);
    };

    // Monotonicity: adding a single searcher never loses value.
    for (Coalition c = 0; c < size; ++c) {
        for (Coalition rest = full & ~c; rest != 0; rest &= rest - 1) {
            const int i = std::countr_zero(rest);
            const Coalition with = c | (Coalition{1} << i);
            if (table.values[with] < table.values[c] - kValueTol) {
                diag.is_monotone = false;
                report({GameViolation::Kind::monotonicity, c, with, i});
            }
        }
    }

    // Submodularity via the local exchange condition: for every coalition C
    // and i != j outside it, v(C+i) + v(C+j) >= v(C+i+j) + v(C). Each hit is
    // reported as the offending pair (C+i, C+j).
    for (Coalition c = 0; c < size; ++c) {
        const Coalition outside = full & ~c;
        for (Coalition ri = outside; ri != 0; ri &= ri - 1) {
            const Coalition bi = ri & (~ri + 1);
            for (Coalition rj = ri & (ri - 1); rj != 0; rj &= rj - 1) {
                const Coalition bj = rj & (~rj + 1);
                const double lhs = table.values[c | bi] + table.values[c | bj];
                const double rhs = table.values[c | bi | bj] + table.values[c];
                if (lhs < rhs - kValueTol) {
                    diag.is_submodular = false;
                    report({GameViolation::Kind::submodularity, c | bi, c | bj, -1});
                }
            }
        }
    }

    // Decreasing marginal value over nested pairs: for A subset of B and a
    // in A, the marginal of a at B is at most its marginal at A.
    for (Coalition b = 0; b < size; ++b) {
        for (Coalition a = b;; a = (a - 1) & b) {
            for (Coalition rest = a; rest != 0; rest &= rest - 1) {
                const Coalition bit = rest & (~rest + 1);
                const double at_b = table.values[b] - table.values[b & ~bit];
                const double at_a = table.values[a] - table.values[a & ~bit];
                if (at_b > at_a + kValueTol) {
                    diag.decreasing_marginal_value = false;
                    report({GameViolation::Kind::marginal_value, a, b,
                            std::countr_zero(bit)});
                }
            }
            if (a == 0) break;
        }
    }

    return diag;
}

bool check_marginal_sum_bound(const ExplicitGame& game, Coalition a, Coalition b) {
    require(subset_of(a, b), "first coalition must be contained in the second");
    require(subset_of(b, game.all_searchers()), "coalition outside searcher range");
    const double value_b = coalition_value(game, b);
    double marginal_sum = 0.0;
    for (Coalition rest = b & ~a; rest != 0; rest &= rest - 1) {
        marginal_sum += value_b - coalition_value(game, b & ~(rest & (~rest + 1)));
    }
    return value_b - coalition_value(game, a) >= marginal_sum - kValueTol;
}

Allocation searcher_optimal_allocation(const ExplicitGame& game) {
    if (!validate_game(game).is_submodular) {
        throw std::invalid_argument("searcher-optimal core point requires a submodular game");
    }
    const CoalitionTable table = coalition_value_table(game);
    const Coalition full = table.full();
    Allocation x;
    x.searcher_shares.resize(game.n_searchers);
    double sum = 0.0;
    for (int i = 0; i < game.n_searchers; ++i) {
        x.searcher_shares[i] = table.at(full) - table.at(full & ~(Coalition{1} << i));
        sum += x.searcher_shares[i];
    }
    x.validator_share = table.at(full) - sum;
    return x;
}

Allocation validator_optimal_allocation(const ExplicitGame& game) {
    Allocation x;
    x.searcher_shares.assign(game.n_searchers, 0.0);
    x.validator_share = coalition_value(game, game.all_searchers());
    return x;
}

}  // namespace mevcore
