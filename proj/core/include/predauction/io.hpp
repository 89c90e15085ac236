#pragma once

#include "predauction/rho.hpp"
#include "predauction/types.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace predauction {

/// Bids from a JSON array of numbers or a single-column CSV (an optional
/// non-numeric header line is skipped). Format is sniffed from the text.
std::vector<double> parse_bids(const std::string& text);
std::vector<double> read_bids_file(const std::string& path);

/// (eta, rho) knots from a two-column CSV, optional header.
std::vector<std::pair<double, double>> parse_rho_table(const std::string& text);
RhoSpec read_rho_table_file(const std::string& path);

/// {"alloc": [...], "pay": [...], "revenue": r[, "winner": i|null]}
std::string outcome_to_json(const Outcome& outcome, bool with_winner = false,
                            std::optional<std::size_t> winner = std::nullopt);

/// 17 significant digits; inf and nan spelled "inf" and "nan".
std::string format_double(double v);

std::string read_text_file(const std::string& path);

/// Writes to a temporary sibling and renames it over `path`, so readers
/// never see a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace predauction
