// Batch experiment runner: game analysis, mechanism settlement, Monte Carlo
// sweeps, calibration and order-flow empirics, all with seeded, byte-stable
// outputs so results can be diffed and regression-tested.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mevcore/bundles.hpp"
#include "mevcore/empirics.hpp"
#include "mevcore/game.hpp"
#include "mevcore/io.hpp"
#include "mevcore/mechanisms.hpp"
#include "mevcore/stochastic.hpp"

namespace {

using namespace mevcore;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    out.flush();
    if (!out) {
        std::remove(path.c_str());
        throw std::runtime_error("failed while writing: " + path);
    }
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
    } else {
        write_file(path, content);
    }
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    return in;
}

// One report line; csv mode turns "key v1 v2" into "key,v1;v2".
class ReportWriter {
public:
    explicit ReportWriter(bool csv) : csv_(csv) {
        if (csv_) out_ << "key,value\n";
    }

    void line(const std::string& key, const std::vector<std::string>& values) {
        out_ << key;
        if (csv_) {
            out_ << ",";
            for (std::size_t i = 0; i < values.size(); ++i) {
                out_ << (i ? ";" : "") << values[i];
            }
        } else {
            for (const std::string& v : values) out_ << " " << v;
        }
        out_ << "\n";
    }

    void line(const std::string& key, const std::string& value) {
        line(key, std::vector<std::string>{value});
    }
    void value_line(const std::string& key, double v) { line(key, format_value(v, 12)); }

    void values_line(const std::string& key, const std::vector<double>& vs) {
        std::vector<std::string> formatted;
        formatted.reserve(vs.size());
        for (double v : vs) formatted.push_back(format_value(v, 12));
        line(key, formatted);
    }

    std::string str() const { return out_.str(); }

private:
    bool csv_;
    std::ostringstream out_;
};

const char* violation_kind_name(GameViolation::Kind kind) {
    switch (kind) {
        case GameViolation::Kind::monotonicity: return "monotonicity";
        case GameViolation::Kind::submodularity: return "submodularity";
        case GameViolation::Kind::marginal_value: return "marginal_value";
    }
    return "unknown";
}

std::string coalition_string(Coalition c) {
    std::string out = "{";
    bool first = true;
    for (int i : coalition_members(c)) {
        if (!first) out += " ";
        out += std::to_string(i);
        first = false;
    }
    return out + "}";
}

struct AnalyzeArgs {
    std::string game_path;
    std::string matrix_path;
    std::optional<int> capacity;
    std::string out_path;
    std::string format = "text";
};

int run_analyze(const AnalyzeArgs& args) {
    if (args.game_path.empty() == args.matrix_path.empty()) {
        throw std::runtime_error("pass exactly one of --game or --matrix");
    }
    std::optional<BundleMatrix> matrix;
    ExplicitGame game;
    if (!args.matrix_path.empty()) {
        auto in = open_input(args.matrix_path);
        matrix = read_matrix_csv(in);
        game = to_general_game(*matrix, args.capacity);
    } else {
        auto in = open_input(args.game_path);
        game = read_game_json(in);
    }

    ReportWriter report(args.format == "csv");
    report.line("n_searchers", std::to_string(game.n_searchers));
    report.line("blocks", std::to_string(game.blocks.size()));
    const double grand = coalition_value(game, game.all_searchers());
    report.value_line("grand_value", grand);
    std::vector<double> marginals;
    for (int i = 0; i < game.n_searchers; ++i) {
        marginals.push_back(marginal_contribution(game, i));
    }
    report.values_line("marginals", marginals);

    bool submodular = false;
    if (game.n_searchers <= 12) {
        const GameDiagnostics diag = validate_game(game);
        submodular = diag.is_submodular;
        report.line("is_monotone", diag.is_monotone ? "yes" : "no");
        report.line("is_submodular", diag.is_submodular ? "yes" : "no");
        report.line("decreasing_marginal_value",
                    diag.decreasing_marginal_value ? "yes" : "no");
        for (const GameViolation& v : diag.violations) {
            report.line("violation", {violation_kind_name(v.kind), coalition_string(v.a),
                                      coalition_string(v.b),
                                      v.element >= 0 ? std::to_string(v.element) : "-"});
        }
    } else {
        report.line("validation", "skipped (more than 12 searchers)");
    }

    if (submodular) {
        const Allocation searcher_opt = searcher_optimal_allocation(game);
        report.values_line("searcher_optimal_shares", searcher_opt.searcher_shares);
        report.value_line("searcher_optimal_validator", searcher_opt.validator_share);
    } else {
        report.line("searcher_optimal_shares", "unavailable (not submodular)");
    }
    const Allocation validator_opt = validator_optimal_allocation(game);
    report.values_line("validator_optimal_shares", validator_opt.searcher_shares);
    report.value_line("validator_optimal_validator", validator_opt.validator_share);

    bool passive = true;
    for (const CandidateBlock& block : game.blocks) {
        passive = passive && block.validator_value == 0.0;
    }
    if (passive) {
        const PaymentOutcome vcg = vcg_payments(game);
        report.line("vcg_block", std::to_string(vcg.block));
        report.values_line("vcg_payments", vcg.payments);
        report.values_line("vcg_utilities", vcg.utilities);
    } else {
        report.line("vcg", "unavailable (active validator)");
    }

    if (matrix) {
        const ValidatorFloor floor = validator_floor(*matrix);
        report.values_line("floor_per_opportunity", floor.per_opportunity);
        report.value_line("floor_total", floor.total);
        const GspOutcome gsp = gsp_bundle_auction(*matrix);
        std::vector<std::string> winners;
        for (const auto& w : gsp.assignment.winner) {
            winners.push_back(w ? std::to_string(*w) : "-");
        }
        report.line("gsp_winners", winners);
        report.values_line("gsp_payments", gsp.payments);
        report.values_line("gsp_utilities", gsp.utilities);
        report.value_line("gsp_revenue", gsp.revenue);
        if (args.capacity) {
            const CapacityFloorCheck check = check_capacity_floor(*matrix, *args.capacity);
            report.value_line("capacity_floor_sum", check.floor_sum);
            report.value_line("capacity_marginal_share", check.marginal_share);
            report.line("capacity_floor_consistent", check.consistent ? "yes" : "no");
        }
    }

    emit(args.out_path, report.str());
    return 0;
}

struct SimulateArgs {
    std::string config_path;
    std::optional<int> n, m, trials, capacity;
    std::optional<double> p;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string format = "csv";
};

SimConfig resolve_config(const SimulateArgs& args) {
    SimConfig config;
    if (!args.config_path.empty()) {
        auto in = open_input(args.config_path);
        config = read_sim_config(in);
    }
    if (args.n) config.n = *args.n;
    if (args.m) config.m = *args.m;
    if (args.p) config.p = *args.p;
    if (args.trials) config.trials = *args.trials;
    if (args.capacity) config.capacity = *args.capacity;
    config.seed = args.seed;
    check_config(config);
    return config;
}

int run_simulate(const SimulateArgs& args) {
    const SimConfig config = resolve_config(args);
    const SimReport report = run_trials(config);
    std::ostringstream out;
    if (args.format == "csv") {
        write_sim_report_csv(out, report);
    } else {
        write_sim_report_text(out, report);
    }
    emit(args.out_path, out.str());
    return 0;
}

struct SweepArgs {
    int n = 1;
    int m = 0;
    std::string grid;
    int trials = 1;
    std::optional<int> capacity;
    std::uint64_t seed = 0;
    std::string out_path;
};

std::vector<double> parse_grid(const std::string& grid) {
    std::vector<double> values;
    std::stringstream stream(grid);
    std::string token;
    while (std::getline(stream, token, ',')) {
        try {
            std::size_t consumed = 0;
            values.push_back(std::stod(token, &consumed));
            if (consumed != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw std::runtime_error("bad grid value: '" + token + "'");
        }
    }
    if (values.empty()) throw std::runtime_error("probability grid is empty");
    return values;
}

int run_sweep(const SweepArgs& args) {
    const std::vector<SweepRow> rows = threshold_sweep(
        args.n, args.m, parse_grid(args.grid), args.trials, args.capacity, args.seed);
    std::ostringstream out;
    write_sweep_csv(out, rows);
    emit(args.out_path, out.str());
    return 0;
}

struct EmpiricsArgs {
    std::string input_path;
    long bin_width = 5;
    bool weighted = false;
    std::string out_prefix;
};

int run_empirics(const EmpiricsArgs& args) {
    auto in = open_input(args.input_path);
    const std::vector<BackrunRecord> records = parse_backrun_csv(in);
    const std::vector<MedianGroup> groups = group_median_profit(records);
    const std::vector<HistogramBin> bins = histogram_counts(records, args.bin_width);
    const LogMedianFit fit = ols_log_median(groups, {args.weighted});

    std::ostringstream medians, histogram, regression;
    write_median_groups_csv(medians, groups);
    write_histogram_csv(histogram, bins);
    write_regression_record(regression, fit.regression);
    regression << "dropped_zero_median " << fit.dropped_zero_median << "\n";

    if (args.out_prefix.empty()) {
        std::cout << "# medians\n" << medians.str();
        std::cout << "# histogram\n" << histogram.str();
        std::cout << "# regression\n" << regression.str();
    } else {
        write_file(args.out_prefix + "_medians.csv", medians.str());
        write_file(args.out_prefix + "_histogram.csv", histogram.str());
        write_file(args.out_prefix + "_regression.txt", regression.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Block-building game experiments: core allocations, auction "
                 "settlement, searcher-competition simulation, OFA empirics"};
    app.require_subcommand(1);

    AnalyzeArgs analyze;
    CLI::App* analyze_cmd = app.add_subcommand(
        "analyze-game", "Coalition values, core points and auction settlements");
    analyze_cmd->add_option("--game", analyze.game_path, "game JSON file");
    analyze_cmd->add_option("--matrix", analyze.matrix_path, "opportunity matrix CSV file");
    analyze_cmd->add_option("--capacity", analyze.capacity, "block capacity bound");
    analyze_cmd->add_option("--out", analyze.out_path, "output file (default stdout)");
    analyze_cmd->add_option("--format", analyze.format, "text or csv")
        ->check(CLI::IsMember({"text", "csv"}));

    SimulateArgs simulate;
    CLI::App* simulate_cmd =
        app.add_subcommand("simulate", "Monte Carlo trials of the competition model");
    simulate_cmd->add_option("--config", simulate.config_path, "config file (key = value)");
    simulate_cmd->add_option("--n", simulate.n, "searchers");
    simulate_cmd->add_option("--m", simulate.m, "opportunities");
    simulate_cmd->add_option("--p", simulate.p, "success probability");
    simulate_cmd->add_option("--trials", simulate.trials, "trial count");
    simulate_cmd->add_option("--capacity", simulate.capacity, "block capacity bound");
    simulate_cmd->add_option("--seed", simulate.seed, "RNG seed")->required();
    simulate_cmd->add_option("--out", simulate.out_path, "output file (default stdout)");
    simulate_cmd->add_option("--format", simulate.format, "csv or text")
        ->check(CLI::IsMember({"csv", "text"}));

    SweepArgs sweep;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Simulate across a probability grid, CSV output");
    sweep_cmd->add_option("--n", sweep.n, "searchers")->required();
    sweep_cmd->add_option("--m", sweep.m, "opportunities")->required();
    sweep_cmd->add_option("--p-grid", sweep.grid, "comma-separated probabilities")
        ->required();
    sweep_cmd->add_option("--trials", sweep.trials, "trials per grid point")->required();
    sweep_cmd->add_option("--capacity", sweep.capacity, "block capacity bound");
    sweep_cmd->add_option("--seed", sweep.seed, "RNG seed")->required();
    sweep_cmd->add_option("--out", sweep.out_path, "output file (default stdout)");

    int calibrate_n = 0;
    double calibrate_q = 0.0;
    std::string calibrate_out;
    CLI::App* calibrate_cmd = app.add_subcommand(
        "calibrate", "Success probability matching an observed clash fraction");
    calibrate_cmd->add_option("n", calibrate_n, "searchers")->required();
    calibrate_cmd->add_option("q", calibrate_q, "clash fraction in (0,1)")->required();
    calibrate_cmd->add_option("--out", calibrate_out, "output file (default stdout)");

    double phi_alpha = 0.0;
    std::string phi_out;
    CLI::App* phi_cmd =
        app.add_subcommand("phi", "Capacity threshold coefficient for a given alpha");
    phi_cmd->add_option("alpha", phi_alpha, "capacity slack fraction in (0,1)")->required();
    phi_cmd->add_option("--out", phi_out, "output file (default stdout)");

    EmpiricsArgs empirics;
    CLI::App* empirics_cmd = app.add_subcommand(
        "empirics", "Median profit by backrun count, histogram and log-median OLS");
    empirics_cmd->add_option("--input", empirics.input_path, "backrun CSV file")
        ->required();
    empirics_cmd->add_option("--bin-width", empirics.bin_width, "histogram bin width");
    empirics_cmd->add_flag("--weighted", empirics.weighted, "weight OLS by group size");
    empirics_cmd->add_option("--out-prefix", empirics.out_prefix,
                             "write <prefix>_medians.csv, _histogram.csv, _regression.txt");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(analyze_cmd)) return run_analyze(analyze);
        if (app.got_subcommand(simulate_cmd)) return run_simulate(simulate);
        if (app.got_subcommand(sweep_cmd)) return run_sweep(sweep);
        if (app.got_subcommand(calibrate_cmd)) {
            emit(calibrate_out, format_value(calibrate_p(calibrate_n, calibrate_q), 12) + "\n");
            return 0;
        }
        if (app.got_subcommand(phi_cmd)) {
            emit(phi_out, format_value(solve_phi(phi_alpha), 12) + "\n");
            return 0;
        }
        if (app.got_subcommand(empirics_cmd)) return run_empirics(empirics);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
