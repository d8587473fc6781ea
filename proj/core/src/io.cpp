#include "mevcore/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace mevcore {

namespace {

using nlohmann::json;

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

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

double parse_double(const std::string& field, std::size_t line_no) {
    try {
        std::size_t consumed = 0;
        const double value = std::stod(field, &consumed);
        if (consumed != field.size() || !std::isfinite(value)) throw std::invalid_argument("");
        return value;
    } catch (const std::exception&) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": not a finite number: '" + field + "'");
    }
}

std::string trim(const std::string& s) {
    const std::size_t begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const std::size_t end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

void write_estimate_text(std::ostream& out, const char* name, const Estimate& e) {
    out << name << " " << format_value(e.freq) << " (se " << format_value(e.se) << ")\n";
}

}  // namespace

std::string format_value(double value, int significant_digits) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*g", significant_digits, value);
    return buffer;
}

ExplicitGame read_game_json(std::istream& input) {
    json doc;
    try {
        doc = json::parse(input);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("game file is not valid JSON: ") + e.what());
    }
    ExplicitGame game;
    try {
        game.n_searchers = doc.at("n_searchers").get<int>();
        for (const json& jb : doc.at("blocks")) {
            CandidateBlock block;
            block.contributors = coalition_of(jb.at("contributors").get<std::vector<int>>());
            block.searcher_values = jb.at("searcher_values").get<std::vector<double>>();
            block.validator_value = jb.value("validator_value", 0.0);
            game.blocks.push_back(std::move(block));
        }
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("malformed game document: ") + e.what());
    }
    check_game(game);
    return game;
}

void write_game_json(std::ostream& output, const ExplicitGame& game) {
    json blocks = json::array();
    for (const CandidateBlock& block : game.blocks) {
        blocks.push_back({{"contributors", coalition_members(block.contributors)},
                          {"searcher_values", block.searcher_values},
                          {"validator_value", block.validator_value}});
    }
    const json doc = {{"n_searchers", game.n_searchers}, {"blocks", blocks}};
    output << doc.dump(2) << "\n";
}

BundleMatrix read_matrix_csv(std::istream& input) {
    std::string line;
    if (!std::getline(input, line)) {
        throw std::runtime_error("line 1: expected header 's0,s1,...'");
    }
    const std::vector<std::string> header = split_fields(strip_cr(line));
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] != "s" + std::to_string(j)) {
            throw std::runtime_error("line 1: expected header 's0,s1,...'");
        }
    }
    BundleMatrix matrix;
    matrix.n = static_cast<int>(header.size());
    std::size_t line_no = 1;
    while (std::getline(input, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " values");
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const std::string& f : fields) row.push_back(parse_double(f, line_no));
        matrix.values.push_back(std::move(row));
    }
    check_matrix(matrix);
    return matrix;
}

void write_matrix_csv(std::ostream& output, const BundleMatrix& matrix) {
    for (int j = 0; j < matrix.n; ++j) output << (j ? "," : "") << "s" << j;
    output << "\n";
    for (const auto& row : matrix.values) {
        for (int j = 0; j < matrix.n; ++j) {
            output << (j ? "," : "") << format_value(row[j], 17);
        }
        output << "\n";
    }
}

SimConfig read_sim_config(std::istream& input) {
    SimConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        line = strip_cr(line);
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (trim(line).empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "n") {
                config.n = std::stoi(value);
            } else if (key == "m") {
                config.m = std::stoi(value);
            } else if (key == "p") {
                config.p = std::stod(value);
            } else if (key == "trials") {
                config.trials = std::stoi(value);
            } else if (key == "seed") {
                config.seed = std::stoull(value);
            } else if (key == "capacity") {
                config.capacity = std::stoi(value);
            } else {
                throw std::runtime_error("line " + std::to_string(line_no) +
                                         ": unknown key '" + key + "'");
            }
        } catch (const std::runtime_error&) {
            throw;
        } catch (const std::exception&) {
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": bad value for '" + key + "'");
        }
    }
    return config;
}

namespace {

constexpr const char* kReportColumns =
    "trials,freq_validator_takes_all,se_validator_takes_all,freq_all_covered_twice,"
    "se_all_covered_twice,freq_all_singletons,se_all_singletons,freq_zero_block,"
    "se_zero_block,freq_searchers_take_all_given_positive,"
    "se_searchers_take_all_given_positive,mean_block_value,mean_floor";

void write_report_row(std::ostream& out, const SimReport& r) {
    out << r.trials << "," << format_value(r.validator_takes_all.freq, 12) << ","
        << format_value(r.validator_takes_all.se, 12) << ","
        << format_value(r.all_covered_twice.freq, 12) << ","
        << format_value(r.all_covered_twice.se, 12) << ","
        << format_value(r.all_singletons.freq, 12) << ","
        << format_value(r.all_singletons.se, 12) << ","
        << format_value(r.zero_block.freq, 12) << "," << format_value(r.zero_block.se, 12)
        << ",";
    if (r.searchers_take_all_given_positive) {
        out << format_value(r.searchers_take_all_given_positive->freq, 12) << ","
            << format_value(r.searchers_take_all_given_positive->se, 12);
    } else {
        out << "NA,NA";
    }
    out << "," << format_value(r.mean_block_value, 12) << ","
        << format_value(r.mean_floor, 12);
}

}  // namespace

void write_sim_report_csv(std::ostream& output, const SimReport& report) {
    output << kReportColumns << "\n";
    write_report_row(output, report);
    output << "\n";
}

void write_sim_report_text(std::ostream& output, const SimReport& report) {
    output << "trials " << report.trials << "\n";
    write_estimate_text(output, "freq_validator_takes_all", report.validator_takes_all);
    write_estimate_text(output, "freq_all_covered_twice", report.all_covered_twice);
    write_estimate_text(output, "freq_all_singletons", report.all_singletons);
    write_estimate_text(output, "freq_zero_block", report.zero_block);
    if (report.searchers_take_all_given_positive) {
        write_estimate_text(output, "freq_searchers_take_all_given_positive",
                            *report.searchers_take_all_given_positive);
    } else {
        output << "freq_searchers_take_all_given_positive NA (no positive-value trial)\n";
    }
    output << "mean_block_value " << format_value(report.mean_block_value) << "\n";
    output << "mean_floor " << format_value(report.mean_floor) << "\n";
}

void write_sweep_csv(std::ostream& output, const std::vector<SweepRow>& rows) {
    output << "p," << kReportColumns
           << ",exact_y_lt2,exact_all_covered_twice,exact_all_singletons,exact_zero_block,"
              "m_lt_n\n";
    for (const SweepRow& row : rows) {
        output << format_value(row.p, 12) << ",";
        write_report_row(output, row.report);
        output << "," << format_value(row.exact.y_lt2, 12) << ","
               << format_value(row.exact.all_covered_twice, 12) << ","
               << format_value(row.exact.all_singletons, 12) << ","
               << format_value(row.exact.zero_block, 12) << "," << (row.small_m ? 1 : 0)
               << "\n";
    }
}

void write_median_groups_csv(std::ostream& output, const std::vector<MedianGroup>& groups) {
    output << "backrun_count,median_profit,group_size\n";
    for (const MedianGroup& g : groups) {
        output << g.backrun_count << "," << format_value(g.median_profit) << ","
               << g.group_size << "\n";
    }
}

void write_histogram_csv(std::ostream& output, const std::vector<HistogramBin>& bins) {
    output << "bin_lo,bin_hi,count\n";
    for (const HistogramBin& b : bins) {
        output << b.lo << "," << b.hi << "," << b.count << "\n";
    }
}

void write_regression_record(std::ostream& output, const RegressionResult& result) {
    output << "intercept " << format_value(result.intercept) << "\n";
    output << "slope " << format_value(result.slope) << "\n";
    output << "r_squared " << format_value(result.r_squared) << "\n";
    output << "n_obs " << result.n_obs << "\n";
    output << "stderr_intercept " << format_value(result.stderr_intercept) << "\n";
    output << "stderr_slope " << format_value(result.stderr_slope) << "\n";
}

RegressionResult read_regression_record(std::istream& input) {
    RegressionResult result;
    std::map<std::string, std::string> fields;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        line = trim(strip_cr(line));
        if (line.empty()) continue;
        const std::size_t space = line.find(' ');
        if (space == std::string::npos) {
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": expected 'key value'");
        }
        fields[line.substr(0, space)] = trim(line.substr(space + 1));
    }
    try {
        result.intercept = std::stod(fields.at("intercept"));
        result.slope = std::stod(fields.at("slope"));
        result.r_squared = std::stod(fields.at("r_squared"));
        result.n_obs = std::stoul(fields.at("n_obs"));
        result.stderr_intercept = std::stod(fields.at("stderr_intercept"));
        result.stderr_slope = std::stod(fields.at("stderr_slope"));
    } catch (const std::exception&) {
        throw std::runtime_error("regression record is missing or has malformed fields");
    }
    return result;
}

void write_payment_outcome(std::ostream& output, const PaymentOutcome& outcome,
                           const std::string& label) {
    output << label << "_block " << outcome.block << "\n";
    output << label << "_payments";
    for (double p : outcome.payments) output << " " << format_value(p);
    output << "\n" << label << "_utilities";
    for (double u : outcome.utilities) output << " " << format_value(u);
    output << "\n";
}

}  // namespace mevcore
