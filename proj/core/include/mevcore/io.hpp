#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mevcore/empirics.hpp"
#include "mevcore/game.hpp"
#include "mevcore/mechanisms.hpp"
#include "mevcore/stochastic.hpp"

namespace mevcore {

// Fixed-notation significant-digit formatting shared by all writers so
// repeated runs stay byte-identical.
std::string format_value(double value, int significant_digits = 6);

/// Game document: {"n_searchers": n, "blocks": [{"contributors": [...],
/// "searcher_values": [...], "validator_value": v}, ...]}. Reading
/// validates the structural invariants.
ExplicitGame read_game_json(std::istream& input);
void write_game_json(std::ostream& output, const ExplicitGame& game);

/// Matrix document: header row `s0,s1,...`, then one row of values per
/// opportunity.
BundleMatrix read_matrix_csv(std::istream& input);
void write_matrix_csv(std::ostream& output, const BundleMatrix& matrix);

/// `key = value` lines for n, m, p, trials, seed and optional capacity.
SimConfig read_sim_config(std::istream& input);

void write_sim_report_csv(std::ostream& output, const SimReport& report);
void write_sim_report_text(std::ostream& output, const SimReport& report);

void write_sweep_csv(std::ostream& output, const std::vector<SweepRow>& rows);

void write_median_groups_csv(std::ostream& output, const std::vector<MedianGroup>& groups);
void write_histogram_csv(std::ostream& output, const std::vector<HistogramBin>& bins);

void write_regression_record(std::ostream& output, const RegressionResult& result);
RegressionResult read_regression_record(std::istream& input);

void write_payment_outcome(std::ostream& output, const PaymentOutcome& outcome,
                           const std::string& label);

}  // namespace mevcore
