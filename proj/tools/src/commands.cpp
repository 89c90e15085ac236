#include "predauction_cli/commands.hpp"

#include "predauction/auction.hpp"
#include "predauction/cr_auction.hpp"
#include "predauction/err_auction.hpp"
#include "predauction/errors.hpp"
#include "predauction/io.hpp"
#include "predauction/rho.hpp"
#include "predauction/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace predauction::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();

ojson jnum(double v)
{
    if (std::isfinite(v)) {
        return v;
    }
    return format_double(v);
}

std::string render(const ojson& j)
{
    return j.dump(2) + "\n";
}

class Csv {
public:
    explicit Csv(std::initializer_list<const char*> header)
    {
        bool first = true;
        for (const char* h : header) {
            out_ << (first ? "" : ",") << h;
            first = false;
        }
        out_ << "\n";
    }
    template <typename... Cells>
    void row(const Cells&... cells)
    {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
        out_ << "\n";
    }
    std::string str() const { return out_.str(); }

private:
    static std::string cell(double v) { return format_double(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(std::size_t v) { return std::to_string(v); }
    static std::string cell(bool v) { return v ? "true" : "false"; }
    static std::string cell(const std::string& v) { return v; }
    static std::string cell(const char* v) { return v; }

    std::ostringstream out_;
};

double one(const std::vector<double>& list, const char* name)
{
    if (list.empty()) {
        throw ValidationError(std::string("missing --") + name);
    }
    if (list.size() != 1) {
        throw ValidationError(std::string("--") + name + " takes a single value here");
    }
    return list.front();
}

double need(const std::optional<double>& v, const char* name)
{
    if (!v) {
        throw ValidationError(std::string("missing --") + name);
    }
    return *v;
}

double finite_H(const RunConfig& cfg)
{
    const double H = one(cfg.H, "H");
    if (!std::isfinite(H)) {
        throw ValidationError("this command needs a finite --H");
    }
    return H;
}

bool err_mode(const RunConfig& cfg)
{
    return cfg.family.has_value() || cfg.rho_table.has_value();
}

RhoSpec build_rho(const RunConfig& cfg, double H)
{
    if (cfg.rho_table) {
        if (cfg.family) {
            throw ValidationError("--family and --rho-table are mutually exclusive");
        }
        return read_rho_table_file(*cfg.rho_table);
    }
    const RhoFamily f = parse_family(*cfg.family);
    double eps = std::numeric_limits<double>::quiet_NaN();
    if (f != RhoFamily::log) {
        eps = one(cfg.eps, "eps");
    }
    return make_family(f, eps, H);
}

CRParams build_cr(const RunConfig& cfg)
{
    if (!cfg.gamma.empty() && cfg.family) {
        throw ValidationError("--gamma/--rho and --family are mutually exclusive");
    }
    CRParams p;
    p.gamma = one(cfg.gamma, "gamma");
    p.rho = need(cfg.rho, "rho");
    p.u_hat = need(cfg.u_hat, "u-hat");
    p.H = finite_H(cfg);
    p.validate();
    return p;
}

ErrParams build_err(const RunConfig& cfg, double H)
{
    if (!cfg.gamma.empty() || cfg.rho) {
        throw ValidationError("--gamma/--rho cannot be combined with a robustness function");
    }
    ErrParams p{build_rho(cfg, H), need(cfg.u_hat, "u-hat"), H};
    p.validate();
    return p;
}

AuctionDefinition build_feasible_auction(const RunConfig& cfg)
{
    if (err_mode(cfg)) {
        return make_err_auction(build_err(cfg, finite_H(cfg)), Feasibility::require);
    }
    return make_cr_auction(build_cr(cfg), Feasibility::require);
}

std::vector<double> log_spaced(double lo, double hi, int count)
{
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(count));
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < count; ++i) {
        const double w = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        pts.push_back(i == count - 1 ? hi : std::exp(a + (b - a) * w));
    }
    return pts;
}

std::string report_csv(const VerificationReport& report)
{
    Csv csv{"name", "pass", "margin", "threshold"};
    for (const auto& c : report.checks) {
        csv.row(c.name, c.pass, c.margin, c.threshold);
    }
    return csv.str();
}

CommandResult finish_report(const RunConfig& cfg, const VerificationReport& report)
{
    CommandResult res;
    res.exit_code = report.overall() ? kExitOk : kExitCheckFailed;
    res.output = cfg.format == Format::csv ? report_csv(report) : report.to_json();
    return res;
}

CheckResult condition_check(double value)
{
    CheckResult c;
    c.name = "condition";
    c.margin = value;
    c.threshold = 1.0;
    c.pass = value <= 1.0;
    c.witness = {{"bound", value}};
    c.note = c.pass ? "" : "parameters violate the feasibility condition";
    return c;
}

} // namespace

CommandResult cmd_frontier(const RunConfig& cfg)
{
    const double u_hat = need(cfg.u_hat, "u-hat");
    const double H = finite_H(cfg);
    std::vector<double> gammas = cfg.gamma;
    if (gammas.empty()) {
        for (int k = 1; k <= 20; ++k) {
            gammas.push_back(k / 20.0);
        }
    }
    for (double g : gammas) {
        if (!(g > 0.0 && g <= 1.0)) {
            throw ValidationError("gamma must lie in (0, 1], got " + format_double(g));
        }
    }
    CRParams{1.0, 0.0, u_hat, H}.validate();

    std::vector<double> rho_star;
    for (double g : gammas) {
        rho_star.push_back(max_robust(g, u_hat, H));
    }

    CommandResult res;
    if (cfg.format == Format::csv) {
        Csv csv{"gamma", "rho_star"};
        for (std::size_t i = 0; i < gammas.size(); ++i) {
            csv.row(gammas[i], rho_star[i]);
        }
        res.output = csv.str();
    } else {
        ojson rows = ojson::array();
        for (std::size_t i = 0; i < gammas.size(); ++i) {
            rows.push_back({{"gamma", gammas[i]}, {"rho_star", rho_star[i]}});
        }
        res.output = render({{"u_hat", u_hat}, {"H", H}, {"rows", rows}});
    }
    return res;
}

CommandResult cmd_simulate(const RunConfig& cfg)
{
    std::vector<double> bids;
    if (cfg.bids) {
        bids = read_bids_file(*cfg.bids);
    } else if (cfg.bid_values) {
        bids = *cfg.bid_values;
    } else {
        throw ValidationError("missing --bids");
    }
    const AuctionDefinition auction = build_feasible_auction(cfg);
    const BidProfile profile(std::move(bids), auction.H);
    const Outcome outcome = run_auction(auction, profile);
    std::optional<std::size_t> winner;
    if (cfg.sample) {
        winner = sample_winner(outcome, cfg.seed);
    }

    CommandResult res;
    if (cfg.format == Format::csv) {
        Csv csv{"agent", "bid", "alloc", "pay"};
        for (std::size_t i = 0; i < profile.size(); ++i) {
            csv.row(i, profile.bids()[i], outcome.alloc[i], outcome.pay[i]);
        }
        res.output = csv.str();
    } else {
        res.output = outcome_to_json(outcome, cfg.sample, winner);
    }
    return res;
}

CommandResult cmd_verify(const RunConfig& cfg)
{
    const double H = finite_H(cfg);
    const bool err = err_mode(cfg);
    std::optional<CRParams> cr;
    std::optional<ErrParams> ep;
    double bound = 0.0;
    if (err) {
        ep = build_err(cfg, H);
        bound = err_condition_sum(ep->rho, ep->u_hat, H);
    } else {
        cr = build_cr(cfg);
        bound = required_alloc_lower_bound(cr->gamma, cr->rho, cr->u_hat, H);
    }

    VerificationReport report;
    if (cfg.expect_infeasible) {
        try {
            report.checks.push_back(err ? witness_infeasibility(ep->rho, ep->u_hat, H)
                                        : witness_infeasibility(*cr));
        } catch (const PreconditionError& e) {
            CheckResult c = condition_check(bound);
            c.name = "witness";
            c.pass = false;
            c.note = "expected infeasible parameters, but the condition holds";
            report.checks.push_back(c);
        }
        return finish_report(cfg, report);
    }

    const bool feasible = err ? err_condition(ep->rho, ep->u_hat, H)
                              : cr_condition(cr->gamma, cr->rho, cr->u_hat, H);
    CheckResult cond = condition_check(bound);
    cond.pass = feasible;
    if (feasible) {
        cond.note.clear();
    }
    report.checks.push_back(cond);
    if (!feasible) {
        return finish_report(cfg, report);
    }

    const AuctionDefinition auction = err ? make_err_auction(*ep, Feasibility::unchecked)
                                          : make_cr_auction(*cr, Feasibility::unchecked);
    const double u_hat = err ? ep->u_hat : cr->u_hat;
    const GridSpec grid = GridSpec::around_prediction(u_hat, H, cfg.grid_points.value_or(200),
                                                      cfg.seed);
    const VerificationReport suite = run_suite(auction, grid);
    report.checks.insert(report.checks.end(), suite.checks.begin(), suite.checks.end());
    return finish_report(cfg, report);
}

CommandResult cmd_curve(const RunConfig& cfg)
{
    const AuctionDefinition auction = build_feasible_auction(cfg);
    const double H = auction.H;
    const double u_hat = auction.u_hat;
    std::vector<double> ts = log_spaced(1.0, H, cfg.grid_points.value_or(200));
    ts.push_back(u_hat);
    ts = normalize_points(std::move(ts), H);

    struct Row {
        double t, eta, ratio, floor;
    };
    std::vector<Row> rows;
    rows.reserve(ts.size());
    for (double t : ts) {
        const BidProfile profile({t}, H);
        rows.push_back({t, std::max(t / u_hat, u_hat / t), revenue_ratio(auction, profile),
                        auction.revenue_floor(t)});
    }

    CommandResult res;
    if (cfg.format == Format::csv) {
        Csv csv{"t", "eta", "revenue_ratio", "guarantee_floor"};
        for (const auto& r : rows) {
            csv.row(r.t, r.eta, r.ratio, r.floor);
        }
        res.output = csv.str();
    } else {
        ojson arr = ojson::array();
        for (const auto& r : rows) {
            arr.push_back({{"t", r.t},
                           {"eta", r.eta},
                           {"revenue_ratio", r.ratio},
                           {"guarantee_floor", r.floor}});
        }
        res.output = render({{"auction", auction.name}, {"u_hat", u_hat}, {"H", H}, {"rows", arr}});
    }
    return res;
}

CommandResult cmd_families(const RunConfig& cfg)
{
    std::vector<RhoFamily> families;
    const bool explicit_family = cfg.family.has_value();
    if (explicit_family) {
        families.push_back(parse_family(*cfg.family));
    } else {
        families = {RhoFamily::polylog, RhoFamily::log, RhoFamily::sublog};
    }
    const std::vector<double> eps_list =
        cfg.eps.empty() ? std::vector<double>{0.25, 0.5, 1.0} : cfg.eps;
    const std::vector<double> H_list =
        cfg.H.empty() ? std::vector<double>{10.0, 1e3, 1e6} : cfg.H;
    const int eta_points = cfg.grid_points.value_or(25);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    struct Entry {
        RhoFamily family;
        double eps;
        double H;
        std::vector<double> eta;
        std::vector<double> rho;
        double slack[3];
        double csc_closed;
    };
    std::vector<Entry> entries;
    bool all_feasible = true;

    for (RhoFamily f : families) {
        const std::vector<double> eps_for =
            f == RhoFamily::log ? std::vector<double>{nan} : eps_list;
        for (double eps : eps_for) {
            if (f == RhoFamily::sublog && !(eps > 0.0 && eps < 1.0)) {
                if (explicit_family) {
                    throw ValidationError("sublog needs eps in (0, 1), got " + format_double(eps));
                }
                continue;
            }
            for (double H : H_list) {
                if (!std::isfinite(H) && f != RhoFamily::polylog) {
                    if (explicit_family) {
                        throw ValidationError("only polylog supports unbounded H");
                    }
                    continue;
                }
                const RhoSpec rho = make_family(f, eps, H);
                Entry e{f, eps, H, {}, {}, {nan, nan, nan}, nan};
                e.eta = log_spaced(1.0, std::min(H, 1e12), eta_points);
                for (double x : e.eta) {
                    e.rho.push_back(rho(x));
                }
                if (std::isfinite(H)) {
                    const double us[3] = {1.0, std::sqrt(H), H};
                    for (int k = 0; k < 3; ++k) {
                        e.slack[k] = 1.0 - err_condition_sum(rho, us[k], H);
                    }
                } else {
                    const double s = 1.0 - err_condition_sum(rho, 1.0, H);
                    e.slack[0] = e.slack[1] = e.slack[2] = s;
                }
                for (double s : e.slack) {
                    all_feasible = all_feasible && s >= -kErrConditionTol;
                }
                if (f == RhoFamily::polylog) {
                    e.csc_closed = polylog_integral_closed(eps);
                }
                entries.push_back(std::move(e));
            }
        }
    }

    CommandResult res;
    res.exit_code = all_feasible ? kExitOk : kExitCheckFailed;
    if (cfg.format == Format::csv) {
        Csv csv{"family", "eps", "H", "eta", "rho", "slack_u_1", "slack_u_sqrtH", "slack_u_H",
                "csc_closed"};
        for (const auto& e : entries) {
            const std::string eps = std::isnan(e.eps) ? "" : format_double(e.eps);
            const std::string csc = std::isnan(e.csc_closed) ? "" : format_double(e.csc_closed);
            for (std::size_t i = 0; i < e.eta.size(); ++i) {
                csv.row(to_string(e.family), eps, e.H, e.eta[i], e.rho[i], e.slack[0],
                        e.slack[1], e.slack[2], csc);
            }
        }
        res.output = csv.str();
    } else {
        ojson arr = ojson::array();
        for (const auto& e : entries) {
            ojson pts = ojson::array();
            for (std::size_t i = 0; i < e.eta.size(); ++i) {
                pts.push_back({{"eta", e.eta[i]}, {"rho", e.rho[i]}});
            }
            ojson item = {{"family", to_string(e.family)},
                          {"eps", std::isnan(e.eps) ? ojson(nullptr) : ojson(e.eps)},
                          {"H", jnum(e.H)},
                          {"slack", {{"u_1", e.slack[0]},
                                     {"u_sqrtH", e.slack[1]},
                                     {"u_H", e.slack[2]}}},
                          {"csc_closed", std::isnan(e.csc_closed) ? ojson(nullptr)
                                                                   : ojson(e.csc_closed)},
                          {"points", pts}};
            arr.push_back(std::move(item));
        }
        res.output = render({{"families", arr}});
    }
    return res;
}

} // namespace predauction::cli
