#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace predauction::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitUsage = 2,
};

enum class Format { json, csv };

/// Merged flags and config-file values for one subcommand run. List-valued
/// fields (gamma, H, eps) accept comma-separated flag values or JSON arrays;
/// commands that need a single value reject longer lists.
struct RunConfig {
    std::vector<double> gamma;
    std::optional<double> rho;
    std::optional<double> u_hat;
    std::vector<double> H;
    std::optional<std::string> family;
    std::vector<double> eps;
    std::optional<std::string> rho_table;
    std::optional<std::string> bids;
    /// Inline bids from a config file; a --bids flag replaces them.
    std::optional<std::vector<double>> bid_values;
    std::optional<int> grid_points;
    std::uint64_t seed = 0;
    Format format = Format::json;
    std::optional<std::string> out;
    bool expect_infeasible = false;
    bool sample = false;
};

struct CommandResult {
    int exit_code = kExitOk;
    std::string output;
};

CommandResult cmd_frontier(const RunConfig& cfg);
CommandResult cmd_simulate(const RunConfig& cfg);
CommandResult cmd_verify(const RunConfig& cfg);
CommandResult cmd_curve(const RunConfig& cfg);
CommandResult cmd_families(const RunConfig& cfg);

/// Full command-line entry point: parses argv, merges --config, dispatches,
/// writes the output (to --out atomically, else to `out`) and returns the
/// exit code. Diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Parses "1,2.5,inf" into numbers; throws ValidationError.
std::vector<double> parse_number_list(const std::string& text);

} // namespace predauction::cli
