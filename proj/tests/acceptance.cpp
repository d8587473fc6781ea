// Acceptance suite: every release criterion as an executable check, one
// PASS/FAIL line each. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mevcore/bundles.hpp"
#include "mevcore/empirics.hpp"
#include "mevcore/game.hpp"
#include "mevcore/io.hpp"
#include "mevcore/mechanisms.hpp"
#include "mevcore/stochastic.hpp"
#include "support/corpus.hpp"

namespace fs = std::filesystem;
using namespace mevcore;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
    std::string name;
    bool passed = true;
    std::ostringstream detail;

    void expect(bool condition, const std::string& what) {
        if (!condition) {
            passed = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << what;
        }
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_seconds(double s) {
    std::ostringstream out;
    out.precision(1);
    out << std::fixed << s << " s";
    return out.str();
}

// ---------------------------------------------------------------------------

void criterion_core_equivalence(Criterion& c) {
    const auto start = Clock::now();
    SplitMix64 rng(0xC0DE0001);
    long mismatches = 0;
    for (int g = 0; g < 1000; ++g) {
        const corpus::GameCase instance = corpus::random_submodular_game(rng);
        const CoalitionTable table = coalition_value_table(instance.game);
        for (int k = 0; k < 100; ++k) {
            const Allocation x = corpus::random_candidate(rng, table);
            if (core_membership_bruteforce(table, x) !=
                core_membership_characterization(table, x)) {
                ++mismatches;
            }
        }
    }
    const double elapsed = seconds_since(start);
    c.expect(mismatches == 0, std::to_string(mismatches) + " disagreements");
    c.expect(elapsed < 60.0, "took " + format_seconds(elapsed));
    c.detail << (c.detail.tellp() > 0 ? "; " : "") << "1000 games x 100 allocations, "
             << format_seconds(elapsed);
}

void criterion_vcg_coincidence(Criterion& c) {
    SplitMix64 rng(0xC0DE0001);  // same corpus as the equivalence criterion
    double worst = 0.0;
    for (int g = 0; g < 1000; ++g) {
        const corpus::GameCase instance = corpus::random_submodular_game(rng);
        const CoalitionTable table = coalition_value_table(instance.game);
        for (int k = 0; k < 100; ++k) corpus::random_candidate(rng, table);

        const PaymentOutcome vcg = vcg_payments(instance.game);
        const Coalition full = table.full();
        for (int i = 0; i < instance.game.n_searchers; ++i) {
            const double marginal = table.at(full) - table.at(full & ~(Coalition{1} << i));
            worst = std::max(worst, std::abs(vcg.utilities[i] - marginal));
        }
    }
    c.expect(worst <= 1e-9, "max utility gap " + format_value(worst, 3));
    c.detail << "max |vcg utility - marginal| = " << format_value(worst, 3);
}

void criterion_misreport(Criterion& c) {
    SplitMix64 rng(0xC0DE0001);
    long constructed = 0;
    for (int g = 0; g < 1000; ++g) {
        const corpus::GameCase instance = corpus::random_submodular_game(rng);
        const CoalitionTable table = coalition_value_table(instance.game);
        for (int k = 0; k < 100; ++k) corpus::random_candidate(rng, table);

        // a first-price style core selection: the validator extracts all
        const PaymentOutcome observed = payments_for_allocation(
            instance.game, validator_optimal_allocation(instance.game));
        for (int j = 0; j < instance.game.n_searchers; ++j) {
            const MisreportResult res = construct_misreport(instance.game, j, observed);
            if (observed.payments[j] - res.vcg_floor <= 1e-6) {
                c.expect(res.at_floor, "floor case not detected");
                continue;
            }
            c.expect(!res.at_floor, "profitable case reported as at-floor");
            if (res.at_floor) continue;
            ++constructed;
            const GameDiagnostics diag = validate_game(res.modified);
            c.expect(diag.is_monotone && diag.is_submodular,
                     "modified game failed validation");
            // the observed block still achieves the modified grand value
            double realized_total = 0.0;
            for (double v : res.modified.blocks[observed.block].searcher_values) {
                realized_total += v;
            }
            c.expect(std::abs(realized_total -
                              coalition_value(res.modified,
                                              res.modified.all_searchers())) <= 1e-9,
                     "realized block lost optimality");
            c.expect(res.payment_bound < observed.payments[j],
                     "payment bound not strictly lower");
            // the worst core-consistent payment on the modified game is the
            // full extraction point and it stays at or below the bound
            const PaymentOutcome worst_case = payments_for_allocation(
                res.modified, validator_optimal_allocation(res.modified));
            c.expect(worst_case.payments[j] <= res.payment_bound + 1e-9,
                     "max core payment exceeds the bound");
            c.expect(worst_case.payments[j] < observed.payments[j],
                     "max core payment not strictly below the observed payment");
            if (!c.passed) return;
        }
    }
    c.expect(constructed > 500, "corpus exercised only " + std::to_string(constructed) +
                                    " constructions");
    c.detail << constructed << " profitable misreports verified";
}

void criterion_gsp_and_floor(Criterion& c) {
    SplitMix64 rng(0xC0DE0004);
    double worst = 0.0;
    for (int it = 0; it < 1000; ++it) {
        const BundleMatrix matrix = corpus::random_matrix(rng, 4, 4, 9);
        const ValidatorFloor floor = validator_floor(matrix);
        const GspOutcome gsp = gsp_bundle_auction(matrix);
        worst = std::max(worst, std::abs(gsp.revenue - floor.total));

        const BundleOutcome outcome = searcher_optimal_bundle_allocation(matrix);
        worst = std::max(worst, std::abs(outcome.allocation.validator_share - floor.total));
        const ExplicitGame game = to_general_game(matrix);
        for (int j = 0; j < matrix.n; ++j) {
            worst = std::max(worst, std::abs(outcome.allocation.searcher_shares[j] -
                                             marginal_contribution(game, j)));
        }
    }
    c.expect(worst <= 1e-9, "max deviation " + format_value(worst, 3));
    c.detail << "1000 matrices, max deviation " << format_value(worst, 3);
}

void criterion_high_competition(Criterion& c) {
    const auto start = Clock::now();
    SimConfig config;
    config.n = 200;
    config.m = 50;
    config.p = 2.0 * std::log(200.0) / 200.0;
    config.trials = 10000;
    config.seed = 0xC0DE0005;
    const SimReport report = run_trials(config);
    const EventProbabilities exact = exact_event_probabilities(config.n, config.m, config.p);
    const double elapsed = seconds_since(start);

    c.expect(report.all_covered_twice.freq >= 0.95,
             "freq " + format_value(report.all_covered_twice.freq, 6) + " < 0.95");
    const double gap = std::abs(report.all_covered_twice.freq - exact.all_covered_twice);
    c.expect(gap <= 4.0 * report.all_covered_twice.se,
             "gap " + format_value(gap, 3) + " beyond 4 se");
    c.expect(elapsed < 30.0, "took " + format_seconds(elapsed));
    c.detail << "freq " << format_value(report.all_covered_twice.freq, 6) << " vs exact "
             << format_value(exact.all_covered_twice, 6) << ", " << format_seconds(elapsed);
}

void criterion_sparse_competition(Criterion& c) {
    SimConfig config;
    config.n = 1000;
    config.m = 3;
    config.p = 0.001;
    config.trials = 100000;
    config.seed = 0xC0DE0006;
    const SimReport report = run_trials(config);
    const EventProbabilities exact = exact_event_probabilities(config.n, config.m, config.p);
    const double gap = std::abs(report.all_singletons.freq - exact.all_singletons);
    c.expect(gap <= 4.0 * report.all_singletons.se,
             "gap " + format_value(gap, 3) + " beyond 4 se");
    c.detail << "freq " << format_value(report.all_singletons.freq, 6) << " vs exact "
             << format_value(exact.all_singletons, 6);
}

void criterion_calibration(Criterion& c) {
    const double p = calibrate_p(125, 2.0 / 3.0);
    c.expect(p >= 0.0090 && p <= 0.0105,
             "p = " + format_value(p, 6) + " outside [0.0090, 0.0105]");
    const double residual =
        std::abs(exact_event_probabilities(125, 1, p).y_lt2 - 2.0 / 3.0);
    c.expect(residual < 1e-9, "round-trip residual " + format_value(residual, 3));
    c.detail << "p = " << format_value(p, 6) << ", residual "
             << format_value(residual, 3);
}

void criterion_phi_solver(Criterion& c) {
    double previous = std::numeric_limits<double>::infinity();
    double worst_residual = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double alpha = 0.01 + (0.98 * (k + 1)) / 101.0;
        const double phi = solve_phi(alpha);
        worst_residual = std::max(
            worst_residual,
            std::abs((1.0 + phi) * std::exp(-phi) - alpha / std::exp(1.0)));
        c.expect(phi < previous, "phi not strictly decreasing at alpha = " +
                                     format_value(alpha, 6));
        previous = phi;
    }
    c.expect(worst_residual < 1e-10, "residual " + format_value(worst_residual, 3));
    const double at_known = solve_phi(4.0 * std::exp(-2.0));
    c.expect(std::abs(at_known - 3.0) <= 1e-8,
             "phi(4e^-2) = " + format_value(at_known, 12));
    c.detail << "100 alphas, max residual " << format_value(worst_residual, 3);
}

void criterion_capacity_discrepancy(Criterion& c) {
    BundleMatrix matrix;
    matrix.n = 2;
    matrix.values = {{3.0, 1.0}, {0.0, 2.0}};

    const Allocation marginal_based = capacity_searcher_optimal(matrix, 1);
    c.expect(std::abs(marginal_based.validator_share - 2.0) <= 1e-9,
             "marginal validator share != 2");
    c.expect(std::abs(marginal_based.searcher_shares[0] - 1.0) <= 1e-9 &&
                 std::abs(marginal_based.searcher_shares[1] - 0.0) <= 1e-9,
             "marginal shares != (1, 0)");

    const CapacityFloorCheck check = check_capacity_floor(matrix, 1);
    c.expect(std::abs(check.floor_sum - 1.0) <= 1e-9, "floor formula != 1");
    c.expect(!check.consistent, "disagreement not flagged");

    const ExplicitGame game = to_general_game(matrix, 1);
    c.expect(core_membership_bruteforce(game, marginal_based),
             "marginal-based point rejected by brute force");

    // the formula floor cannot budget-balance: shares are capped by the
    // marginals (1, 0), so totals reach at most 2 < 3
    Allocation formula_based;
    formula_based.searcher_shares = {1.0, 0.0};
    formula_based.validator_share = check.floor_sum;
    c.expect(!core_membership_bruteforce(game, formula_based),
             "formula floor point accepted by brute force");
    const double best_total = 1.0 + 0.0 + check.floor_sum;
    c.expect(best_total < coalition_value(game, game.all_searchers()) - 1e-9,
             "formula floor allocation balances after all");
    c.detail << "marginal share 2 vs formula floor 1, flagged";
}

void criterion_empirics(Criterion& c) {
    // (a) planted slope recovered within 3 standard errors
    SplitMix64 rng(0xC0DE000A);
    std::vector<MedianGroup> groups;
    for (long count = 0; count < 200; ++count) {
        const double u1 = rng.next_unit();
        const double u2 = rng.next_unit();
        const double noise =
            0.1 * std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(6.283185307179586 * u2);
        groups.push_back(
            {count, std::exp(-2.0 + 0.05 * static_cast<double>(count) + noise), 6});
    }
    const LogMedianFit planted = ols_log_median(groups);
    c.expect(std::abs(planted.regression.slope - 0.05) <=
                 3.0 * planted.regression.stderr_slope,
             "planted slope missed: " + format_value(planted.regression.slope, 6));

    // (b) exact line
    std::vector<MedianGroup> line;
    for (long count = 0; count <= 2; ++count) {
        line.push_back({count, std::exp(1.0 + 2.0 * static_cast<double>(count)), 1});
    }
    const LogMedianFit exact = ols_log_median(line);
    c.expect(std::abs(exact.regression.r_squared - 1.0) <= 1e-12,
             "exact line r^2 = " + format_value(exact.regression.r_squared, 12));

    // (c) synthesis from the competition model: profit is the runner-up bid
    int nonnegative = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::vector<BackrunRecord> records;
        SplitMix64 stream = trial_stream(seed, 0xE);
        for (int t = 0; t < 4000; ++t) {
            int found = 0;
            std::vector<double> bids;
            for (int j = 0; j < 40; ++j) {
                if (stream.next_unit() < 0.05) {
                    ++found;
                    bids.push_back(stream.next_unit());
                }
            }
            records.push_back({"t" + std::to_string(t), found, second_highest(bids)});
        }
        const LogMedianFit fit = ols_log_median(group_median_profit(records));
        if (fit.regression.slope >= 0.0) ++nonnegative;
    }
    c.expect(nonnegative == 20,
             "nonnegative slope in only " + std::to_string(nonnegative) + "/20 syntheses");
    c.detail << "slope " << format_value(planted.regression.slope, 4) << " (se "
             << format_value(planted.regression.stderr_slope, 3) << "), r^2 = 1 on line, "
             << nonnegative << "/20 syntheses nonnegative";
}

struct CliHarness {
    std::string binary;
    fs::path dir;

    bool run(const std::string& args) const {
        const std::string command = binary + " " + args + " >/dev/null 2>&1";
        return std::system(command.c_str()) == 0;
    }

    std::string file(const std::string& name) const { return (dir / name).string(); }

    static std::string slurp(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream out;
        out << in.rdbuf();
        return out.str();
    }
};

void criterion_cli_determinism(Criterion& c, const std::string& cli) {
    if (cli.empty()) {
        c.expect(false, "no --cli <path> given");
        return;
    }
    CliHarness harness;
    harness.binary = cli;
    harness.dir = fs::path("acceptance_scratch");
    fs::remove_all(harness.dir);
    fs::create_directories(harness.dir);

    {
        std::ofstream matrix(harness.file("m.csv"), std::ios::binary);
        matrix << "s0,s1\n3,1\n0,2\n";
        std::ofstream game(harness.file("g.json"), std::ios::binary);
        game << R"({"n_searchers": 2, "blocks": [
                {"contributors": [], "searcher_values": [0, 0], "validator_value": 0},
                {"contributors": [0, 1], "searcher_values": [2, 3], "validator_value": 0}
              ]})";
        std::ofstream backruns(harness.file("b.csv"), std::ios::binary);
        backruns << "target_id,backrun_count,profit\n";
        SplitMix64 rng(0xC0DE000B);
        for (int t = 0; t < 500; ++t) {
            backruns << "t" << t << "," << rng.next_u64() % 12 << ","
                     << format_value(0.1 + rng.next_unit() * 3.0) << "\n";
        }
    }

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"analyze-game --matrix {dir}/m.csv --out {out}", "analyze_matrix"},
        {"analyze-game --matrix {dir}/m.csv --capacity 1 --format csv --out {out}",
         "analyze_capacity"},
        {"analyze-game --game {dir}/g.json --out {out}", "analyze_game"},
        {"simulate --n 60 --m 5 --p 0.05 --trials 2000 --seed 77 --out {out}", "simulate"},
        {"simulate --n 60 --m 5 --p 0.05 --trials 2000 --seed 77 --format text --out {out}",
         "simulate_text"},
        {"sweep --n 40 --m 4 --p-grid 0.01,0.05,0.2 --trials 500 --seed 9 --out {out}",
         "sweep"},
        {"calibrate 125 0.6666666666666666 --out {out}", "calibrate"},
        {"phi 0.5413411329464508 --out {out}", "phi"},
        {"empirics --input {dir}/b.csv --out-prefix {out}", "empirics"},
    };

    for (const auto& [tmpl, label] : commands) {
        for (int round = 1; round <= 2; ++round) {
            std::string command = tmpl;
            const std::string out = harness.file(label + "_" + std::to_string(round));
            for (std::string::size_type at; (at = command.find("{dir}")) != std::string::npos;) {
                command.replace(at, 5, harness.dir.string());
            }
            for (std::string::size_type at; (at = command.find("{out}")) != std::string::npos;) {
                command.replace(at, 5, out);
            }
            if (!harness.run(command)) {
                c.expect(false, label + " exited nonzero");
                return;
            }
        }
        if (label == "empirics") {
            for (const char* suffix : {"_medians.csv", "_histogram.csv", "_regression.txt"}) {
                c.expect(CliHarness::slurp(harness.file(label + std::string("_1") + suffix)) ==
                             CliHarness::slurp(harness.file(label + std::string("_2") + suffix)),
                         label + std::string(suffix) + " differs between runs");
            }
        } else {
            const std::string first = CliHarness::slurp(harness.file(label + "_1"));
            c.expect(!first.empty(), label + " produced no output");
            c.expect(first == CliHarness::slurp(harness.file(label + "_2")),
                     label + " differs between runs");
        }
    }
    fs::remove_all(harness.dir);
    c.detail << commands.size() << " subcommands, two runs each";
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
    }

    std::vector<Criterion> criteria(11);
    criteria[0].name = "Core characterization equals brute force on the random corpus";
    criterion_core_equivalence(criteria[0]);
    criteria[1].name = "VCG utilities equal the searcher-optimal core shares";
    criterion_vcg_coincidence(criteria[1]);
    criteria[2].name = "Misreports beat above-floor payments on core selections";
    criterion_misreport(criteria[2]);
    criteria[3].name = "GSP revenue equals the validator floor; bundle shares match marginals";
    criterion_gsp_and_floor(criteria[3]);
    criteria[4].name = "High competition: all opportunities contested (n=200, m=50)";
    criterion_high_competition(criteria[4]);
    criteria[5].name = "Sparse competition: all-singleton frequency (n=1000, m=3)";
    criterion_sparse_competition(criteria[5]);
    criteria[6].name = "Clash calibration lands near one percent";
    criterion_calibration(criteria[6]);
    criteria[7].name = "Capacity threshold coefficient solver";
    criterion_phi_solver(criteria[7]);
    criteria[8].name = "Capacity floor disagreement is detected and resolved by marginals";
    criterion_capacity_discrepancy(criteria[8]);
    criteria[9].name = "Empirics: planted slope, exact line, competition synthesis";
    criterion_empirics(criteria[9]);
    criteria[10].name = "CLI subcommands are byte-deterministic";
    criterion_cli_determinism(criteria[10], cli);

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const Criterion& c = criteria[i];
        if (!c.passed) ++failures;
        std::cout << "[" << (i + 1 < 10 ? " " : "") << i + 1 << "/11] "
                  << (c.passed ? "PASS" : "FAIL") << "  " << c.name;
        const std::string detail = c.detail.str();
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
    }
    if (failures == 0) {
        std::cout << "all 11 acceptance criteria passed\n";
    } else {
        std::cout << failures << " acceptance criteria failed\n";
    }
    return failures == 0 ? 0 : 1;
}
