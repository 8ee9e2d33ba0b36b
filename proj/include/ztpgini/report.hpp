#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ztpgini/gini.hpp"
#include "ztpgini/montecarlo.hpp"

namespace ztpgini::report {

/// Input that fails validation; the message is meant for the user.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Counts from a text stream: one integer per line, or a single-column CSV
/// whose first line is the header `count`. Blank lines are skipped.
std::vector<std::int64_t> read_counts(std::istream& in);

/// Comma-separated list, e.g. "0.1,0.5,1".
std::vector<double> parse_double_list(std::string_view text);
std::vector<int> parse_int_list(std::string_view text);

inline constexpr std::string_view kSimulationCsvHeader =
    "lambda,n,true_g,mean_g_hat,mean_g_bc,rel_bias_std,rel_bias_bc,mse_std,mse_bc,degenerate_count,reps,seed";

/// Summary table, LF line endings, shortest round-trip numbers.
void write_simulation_csv(std::ostream& out, const std::vector<mc::SimCellSummary>& cells, std::uint64_t seed);

inline constexpr std::string_view kEstimateCsvHeader = "n,g_hat,lambda_hat,lambda_degenerate,bias_hat,g_hat_bc";
void write_estimate_csv_row(std::ostream& out, const gini::GiniReport& report);

enum class Metric { RelativeBias, Mse };

/// Line chart of a metric against n: one colour per lambda, solid for the
/// standard estimator and dashed for the corrected one.
void write_svg(std::ostream& out, const std::vector<mc::SimCellSummary>& cells, Metric metric, bool log_y = false);

}  // namespace ztpgini::report
