#include "predauction_cli/commands.hpp"

#include "predauction/errors.hpp"
#include "predauction/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace predauction::cli {

namespace {

struct RawFlags {
    std::string config;
    std::string gamma;
    double rho = 0.0;
    double u_hat = 0.0;
    std::string H;
    std::string family;
    std::string eps;
    std::string rho_table;
    std::string bids;
    int grid_points = 0;
    std::uint64_t seed = 0;
    std::string format;
    std::string out;
    bool expect_infeasible = false;
    bool sample = false;
};

void add_flags(CLI::App* sub, RawFlags& f)
{
    sub->add_option("--config", f.config, "JSON config file; flags override its values");
    sub->add_option("--gamma", f.gamma, "consistency target (comma list for frontier)");
    sub->add_option("--rho", f.rho, "robustness target");
    sub->add_option("--u-hat", f.u_hat, "prediction of the highest valuation");
    sub->add_option("--H", f.H, "upper bound on valuations ('inf' for unbounded; comma list for families)");
    sub->add_option("--family", f.family, "robustness family: polylog, log or sublog");
    sub->add_option("--eps", f.eps, "family parameter (comma list for families)");
    sub->add_option("--rho-table", f.rho_table, "CSV of (eta, rho) knots for a custom robustness function");
    sub->add_option("--bids", f.bids, "bid profile file (JSON array or single-column CSV)");
    sub->add_option("--grid-points", f.grid_points, "grid resolution");
    sub->add_option("--seed", f.seed, "seed for jitter and sampling");
    sub->add_option("--format", f.format, "output format: json or csv");
    sub->add_option("--out", f.out, "output path (written atomically)");
    sub->add_flag("--expect-infeasible", f.expect_infeasible,
                  "verify: succeed only if the parameters are provably infeasible");
    sub->add_flag("--sample", f.sample, "simulate: draw a winner from the allocation");
}

Format parse_format(const std::string& s)
{
    if (s == "json") {
        return Format::json;
    }
    if (s == "csv") {
        return Format::csv;
    }
    throw ValidationError("--format must be json or csv");
}

std::vector<double> json_numbers(const nlohmann::json& v, const std::string& key)
{
    auto one = [&key](const nlohmann::json& x) {
        if (x.is_number()) {
            return x.get<double>();
        }
        if (x.is_string()) {
            const auto list = parse_number_list(x.get<std::string>());
            if (list.size() == 1) {
                return list.front();
            }
        }
        throw ValidationError("config: '" + key + "' must be a number");
    };
    std::vector<double> out;
    if (v.is_array()) {
        for (const auto& x : v) {
            out.push_back(one(x));
        }
    } else if (v.is_string()) {
        out = parse_number_list(v.get<std::string>());
    } else {
        out.push_back(one(v));
    }
    return out;
}

void apply_config_file(const std::string& path, RunConfig& cfg)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config: malformed JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) {
        throw ValidationError("config: top level must be an object");
    }
    for (const auto& [raw_key, v] : j.items()) {
        std::string key = raw_key;
        for (char& c : key) {
            if (c == '-') {
                c = '_';
            }
        }
        try {
            if (key == "gamma") {
                cfg.gamma = json_numbers(v, key);
            } else if (key == "rho") {
                cfg.rho = json_numbers(v, key).at(0);
            } else if (key == "u_hat") {
                cfg.u_hat = json_numbers(v, key).at(0);
            } else if (key == "H") {
                cfg.H = json_numbers(v, key);
            } else if (key == "eps") {
                cfg.eps = json_numbers(v, key);
            } else if (key == "family") {
                cfg.family = v.get<std::string>();
            } else if (key == "rho_table") {
                cfg.rho_table = v.get<std::string>();
            } else if (key == "bids") {
                if (v.is_array()) {
                    cfg.bid_values = json_numbers(v, key);
                } else {
                    cfg.bids = v.get<std::string>();
                }
            } else if (key == "grid_points") {
                cfg.grid_points = v.get<int>();
            } else if (key == "seed") {
                cfg.seed = v.get<std::uint64_t>();
            } else if (key == "format") {
                cfg.format = parse_format(v.get<std::string>());
            } else if (key == "out") {
                cfg.out = v.get<std::string>();
            } else if (key == "expect_infeasible") {
                cfg.expect_infeasible = v.get<bool>();
            } else if (key == "sample") {
                cfg.sample = v.get<bool>();
            } else {
                throw ValidationError("config: unknown key '" + raw_key + "'");
            }
        } catch (const nlohmann::json::exception&) {
            throw ValidationError("config: wrong type for '" + raw_key + "'");
        }
    }
}

RunConfig merge(const CLI::App& sub, const RawFlags& f)
{
    RunConfig cfg;
    if (sub.count("--config") > 0) {
        apply_config_file(f.config, cfg);
    }
    auto given = [&sub](const char* name) { return sub.count(name) > 0; };
    if (given("--gamma")) {
        cfg.gamma = parse_number_list(f.gamma);
    }
    if (given("--rho")) {
        cfg.rho = f.rho;
    }
    if (given("--u-hat")) {
        cfg.u_hat = f.u_hat;
    }
    if (given("--H")) {
        cfg.H = parse_number_list(f.H);
    }
    if (given("--family")) {
        cfg.family = f.family;
    }
    if (given("--eps")) {
        cfg.eps = parse_number_list(f.eps);
    }
    if (given("--rho-table")) {
        cfg.rho_table = f.rho_table;
    }
    if (given("--bids")) {
        cfg.bids = f.bids;
        cfg.bid_values.reset();
    }
    if (given("--grid-points")) {
        cfg.grid_points = f.grid_points;
    }
    if (given("--seed")) {
        cfg.seed = f.seed;
    }
    if (given("--format")) {
        cfg.format = parse_format(f.format);
    }
    if (given("--out")) {
        cfg.out = f.out;
    }
    if (given("--expect-infeasible")) {
        cfg.expect_infeasible = f.expect_infeasible;
    }
    if (given("--sample")) {
        cfg.sample = f.sample;
    }
    if (cfg.grid_points && *cfg.grid_points < 2) {
        throw ValidationError("--grid-points must be at least 2");
    }
    return cfg;
}

} // namespace

std::vector<double> parse_number_list(const std::string& text)
{
    std::vector<double> out;
    std::istringstream in(text);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        const auto first = cell.find_first_not_of(" \t");
        const auto last = cell.find_last_not_of(" \t");
        if (first == std::string::npos) {
            throw ValidationError("empty entry in number list '" + text + "'");
        }
        cell = cell.substr(first, last - first + 1);
        if (cell == "inf" || cell == "infinity" || cell == "unbounded") {
            out.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(cell, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != cell.size() || std::isnan(v)) {
            throw ValidationError("not a number: '" + cell + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ValidationError("empty number list");
    }
    return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Truthful single-item auctions with predictions: frontiers, simulation, verification"};
    app.require_subcommand(1);
    RawFlags flags;
    struct Entry {
        const char* name;
        const char* help;
        CommandResult (*fn)(const RunConfig&);
        CLI::App* sub = nullptr;
    };
    Entry entries[] = {
        {"frontier", "largest robustness for each consistency target", cmd_frontier},
        {"simulate", "run an auction on a bid profile", cmd_simulate},
        {"verify", "run the DSIC/IR/feasibility/guarantee checks", cmd_verify},
        {"curve", "revenue ratio against its guarantee over the top bid", cmd_curve},
        {"families", "tabulate the robustness families and their feasibility slack", cmd_families},
    };
    for (auto& e : entries) {
        e.sub = app.add_subcommand(e.name, e.help);
        add_flags(e.sub, flags);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    for (const auto& e : entries) {
        if (!e.sub->parsed()) {
            continue;
        }
        try {
            const RunConfig cfg = merge(*e.sub, flags);
            const CommandResult res = e.fn(cfg);
            if (cfg.out) {
                write_file_atomic(*cfg.out, res.output);
            } else {
                out << res.output;
            }
            return res.exit_code;
        } catch (const QuadratureError& ex) {
            err << "error: " << ex.what() << "\n";
            return kExitCheckFailed;
        } catch (const Error& ex) {
            err << "error: " << ex.what() << "\n";
            return kExitUsage;
        }
    }
    return kExitUsage;
}

} // namespace predauction::cli
