#include "predauction/io.hpp"
#include "predauction/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace predauction {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool parse_number(const std::string& cell, double& out)
{
    const std::string c = trim(cell);
    if (c.empty()) {
        return false;
    }
    std::size_t used = 0;
    try {
        out = std::stod(c, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == c.size();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty() || trim(line)[0] == '#') {
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace

std::vector<double> parse_bids(const std::string& text)
{
    const std::string body = trim(text);
    std::vector<double> bids;
    if (!body.empty() && body.front() == '[') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(std::string("bids: malformed JSON: ") + e.what());
        }
        for (const auto& v : j) {
            if (!v.is_number()) {
                throw ValidationError("bids: JSON array must contain only numbers");
            }
            bids.push_back(v.get<double>());
        }
        return bids;
    }
    const auto rows = csv_rows(body);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != 1) {
            throw ValidationError("bids: CSV must have a single column");
        }
        double v = 0.0;
        if (!parse_number(rows[i][0], v)) {
            if (i == 0) {
                continue;  // header
            }
            throw ValidationError("bids: non-numeric value '" + trim(rows[i][0]) + "'");
        }
        bids.push_back(v);
    }
    return bids;
}

std::vector<double> read_bids_file(const std::string& path)
{
    return parse_bids(read_text_file(path));
}

std::vector<std::pair<double, double>> parse_rho_table(const std::string& text)
{
    std::vector<std::pair<double, double>> knots;
    const auto rows = csv_rows(text);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != 2) {
            throw ValidationError("rho table: expected two columns (eta, rho)");
        }
        double eta = 0.0;
        double r = 0.0;
        if (!parse_number(rows[i][0], eta) || !parse_number(rows[i][1], r)) {
            if (i == 0) {
                continue;
            }
            throw ValidationError("rho table: non-numeric row " + std::to_string(i + 1));
        }
        knots.emplace_back(eta, r);
    }
    return knots;
}

RhoSpec read_rho_table_file(const std::string& path)
{
    return make_tabulated(parse_rho_table(read_text_file(path)));
}

std::string outcome_to_json(const Outcome& outcome, bool with_winner,
                            std::optional<std::size_t> winner)
{
    nlohmann::ordered_json j;
    j["alloc"] = outcome.alloc;
    j["pay"] = outcome.pay;
    j["revenue"] = outcome.revenue;
    if (with_winner) {
        j["winner"] = winner ? nlohmann::ordered_json(*winner) : nlohmann::ordered_json(nullptr);
    }
    return j.dump(2) + "\n";
}

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ValidationError("cannot write '" + tmp.string() + "'");
        }
        out << content;
        out.flush();
        if (!out) {
            throw ValidationError("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw ValidationError("cannot move output into '" + path + "': " + ec.message());
    }
}

} // namespace predauction
