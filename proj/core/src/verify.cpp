#include "predauction/verify.hpp"
#include "predauction/err_auction.hpp"
#include "predauction/errors.hpp"
#include "predauction/myerson.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace predauction {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Uniform in [0, 1) from 53 bits, identical on every standard library.
double unit(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt)
{
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void require_finite_H(const AuctionDefinition& a)
{
    if (!std::isfinite(a.H)) {
        throw PreconditionError("grid checks need a finite upper bound H");
    }
}

std::vector<std::pair<std::string, double>> view_witness(double v, double z, double b, int nu)
{
    return {{"v", v}, {"z", z}, {"b", b}, {"nu", static_cast<double>(nu)}};
}

struct ContextGrid {
    double b;
    int nu;
    std::vector<double> values;      // truthful valuations
    std::vector<double> deviations;  // misreports
};

std::vector<ContextGrid> build_grids(const AuctionDefinition& auction, const GridSpec& grid)
{
    require_finite_H(auction);
    grid.validate();
    std::vector<ContextGrid> out;
    const auto ctx = grid.contexts();
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        const auto [b, nu] = ctx[i];
        if (b > auction.H) {
            throw ValidationError("grid context b exceeds H");
        }
        const auto bps = auction.breakpoints(b, nu);
        out.push_back(ContextGrid{
            b, nu,
            sample_points(1.0, auction.H, bps, grid.t_points, mix(grid.jitter_seed, 2 * i)),
            sample_points(1.0, auction.H, bps, grid.deviation_points, mix(grid.jitter_seed, 2 * i + 1))});
    }
    return out;
}

BidProfile top_profile(double t, double b, int nu, double H)
{
    if (nu == 0) {
        return BidProfile({t}, H);
    }
    std::vector<double> bids;
    if (t != b) {
        bids.push_back(t);
    }
    bids.insert(bids.end(), static_cast<std::size_t>(nu), b);
    if (t == b) {
        bids.push_back(b);
    }
    return BidProfile(std::move(bids), H);
}

} // namespace

void GridSpec::validate() const
{
    if (t_points < 2 || deviation_points < 2) {
        throw ValidationError("grid point counts must be at least 2");
    }
    if (b_samples.empty() || nu_samples.empty()) {
        throw ValidationError("grid needs at least one (b, nu) context");
    }
    for (std::size_t i = 0; i < b_samples.size(); ++i) {
        const int nu = nu_samples[i % nu_samples.size()];
        if (nu < 0 || (nu == 0 && b_samples[i] != 1.0) || !(b_samples[i] >= 1.0)) {
            throw ValidationError("grid contexts need b >= 1 and nu >= 1 (or b = 1, nu = 0)");
        }
    }
}

std::vector<std::pair<double, int>> GridSpec::contexts() const
{
    std::vector<std::pair<double, int>> out;
    for (std::size_t i = 0; i < b_samples.size(); ++i) {
        out.emplace_back(b_samples[i], nu_samples[i % nu_samples.size()]);
    }
    return out;
}

GridSpec GridSpec::around_prediction(double u_hat, double H, int points, std::uint64_t seed)
{
    GridSpec g;
    g.t_points = points;
    g.deviation_points = points;
    g.jitter_seed = seed;
    const double below = u_hat > 1.0 ? std::sqrt(u_hat) : 1.0;
    const double above = u_hat < H ? std::sqrt(u_hat * H) : H;
    g.b_samples = {1.0, below, u_hat, above};
    g.nu_samples = {1, 2, 1, 3};
    return g;
}

std::vector<double> sample_points(double lo, double hi, const std::vector<double>& breakpoints,
                                  int count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    const double log_lo = std::log(lo);
    const double span = std::log(hi) - log_lo;
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(count) + 3 * breakpoints.size());
    for (int k = 0; k < count; ++k) {
        double frac = static_cast<double>(k) / (count - 1);
        if (k > 0 && k + 1 < count) {
            frac += (unit(rng) - 0.5) * 0.8 / (count - 1);
        }
        double z = k == 0 ? lo : (k + 1 == count ? hi : std::exp(log_lo + frac * span));
        z = std::clamp(z, lo, hi);
        for (double bp : breakpoints) {
            if (std::abs(z - bp) < kBreakpointOffset * bp) {
                z = z < bp ? bp * (1.0 - kBreakpointOffset) : bp * (1.0 + kBreakpointOffset);
            }
        }
        if (z >= lo && z <= hi) {
            pts.push_back(z);
        }
    }
    for (double bp : breakpoints) {
        if (bp < lo || bp > hi) {
            continue;
        }
        pts.push_back(bp);
        if (bp * (1.0 - kBreakpointOffset) >= lo) {
            pts.push_back(bp * (1.0 - kBreakpointOffset));
        }
        if (bp * (1.0 + kBreakpointOffset) <= hi) {
            pts.push_back(bp * (1.0 + kBreakpointOffset));
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

CheckResult check_dsic(const AuctionDefinition& auction, const GridSpec& grid)
{
    CheckResult r{"dsic", false, -kInf, kDsicTol, {}, ""};
    for (const auto& g : build_grids(auction, grid)) {
        std::vector<double> xz;
        std::vector<double> pz;
        for (double z : g.deviations) {
            xz.push_back(auction.alloc(AgentView{z, g.b, g.nu}));
            pz.push_back(auction.pay(AgentView{z, g.b, g.nu}));
        }
        for (double v : g.values) {
            const AgentView truthful{v, g.b, g.nu};
            const double honest = v * auction.alloc(truthful) - auction.pay(truthful);
            for (std::size_t j = 0; j < g.deviations.size(); ++j) {
                const double gain = v * xz[j] - pz[j] - honest;
                if (gain > r.margin) {
                    r.margin = gain;
                    r.witness = view_witness(v, g.deviations[j], g.b, g.nu);
                }
            }
        }
    }
    r.pass = r.margin <= kDsicTol;
    r.note = "max utility gain from a misreport";
    return r;
}

CheckResult check_ir(const AuctionDefinition& auction, const GridSpec& grid)
{
    CheckResult r{"ir", false, kInf, -kIrTol, {}, "min truthful utility"};
    for (const auto& g : build_grids(auction, grid)) {
        for (double v : g.values) {
            const AgentView view{v, g.b, g.nu};
            const double u = v * auction.alloc(view) - auction.pay(view);
            if (u < r.margin) {
                r.margin = u;
                r.witness = view_witness(v, v, g.b, g.nu);
            }
        }
    }
    r.pass = r.margin >= -kIrTol;
    return r;
}

CheckResult check_monotone(const AuctionDefinition& auction, const GridSpec& grid)
{
    CheckResult r{"monotone", false, 0.0, kMonotoneTol, {}, "largest allocation drop as t grows"};
    for (const auto& g : build_grids(auction, grid)) {
        std::vector<double> ts = g.values;
        ts.insert(ts.end(), g.deviations.begin(), g.deviations.end());
        std::sort(ts.begin(), ts.end());
        double prev = auction.alloc(AgentView{ts.front(), g.b, g.nu});
        for (std::size_t i = 1; i < ts.size(); ++i) {
            const double cur = auction.alloc(AgentView{ts[i], g.b, g.nu});
            if (prev - cur > r.margin) {
                r.margin = prev - cur;
                r.witness = view_witness(ts[i], ts[i - 1], g.b, g.nu);
            }
            prev = cur;
        }
    }
    r.pass = r.margin <= kMonotoneTol;
    return r;
}

CheckResult check_feasible(const AuctionDefinition& auction, const GridSpec& grid)
{
    CheckResult r{"feasible", false, -kInf, 1.0 + kFeasibilityTol, {}, "largest total allocation"};
    for (const auto& g : build_grids(auction, grid)) {
        for (double t : g.values) {
            if (t < g.b) {
                continue;
            }
            const double share = auction.alloc(AgentView{t, g.b, g.nu});
            const double total = t == g.b ? share * std::max(1, g.nu + 1) : share;
            if (total > r.margin) {
                r.margin = total;
                r.witness = view_witness(t, t, g.b, g.nu);
            }
        }
    }
    r.pass = r.margin <= 1.0 + kFeasibilityTol;
    return r;
}

CheckResult check_guarantees(const AuctionDefinition& auction, GuaranteeMode mode,
                             const GridSpec& grid)
{
    CheckResult r{"guarantees", false, kInf, -kGuaranteeTol, {}, ""};
    double worst_equality = 0.0;
    std::vector<std::pair<std::string, double>> equality_witness;
    for (const auto& g : build_grids(auction, grid)) {
        for (double t : g.values) {
            if (t < g.b) {
                continue;
            }
            const double ratio = revenue_ratio(auction, top_profile(t, g.b, g.nu, auction.H));
            const double floor = auction.revenue_floor(t);
            if (ratio - floor < r.margin) {
                r.margin = ratio - floor;
                r.witness = {{"t", t}, {"b", g.b}, {"nu", static_cast<double>(g.nu)},
                             {"ratio", ratio}, {"floor", floor}};
            }
            const bool equality_point = mode == GuaranteeMode::err || t == auction.u_hat;
            if (equality_point && std::abs(ratio - floor) > worst_equality) {
                worst_equality = std::abs(ratio - floor);
                equality_witness = {{"t", t}, {"b", g.b}, {"nu", static_cast<double>(g.nu)},
                                    {"ratio", ratio}, {"floor", floor}};
            }
        }
    }
    const double equality_tol = mode == GuaranteeMode::cr ? kConsistencyTol : kGuaranteeTol;
    const bool equality_ok = worst_equality <= equality_tol;
    r.pass = r.margin >= -kGuaranteeTol && equality_ok;
    std::ostringstream note;
    note.precision(17);
    note << "min(ratio - floor); max |ratio - floor| at "
         << (mode == GuaranteeMode::cr ? "t = u_hat" : "every point") << " = " << worst_equality;
    r.note = note.str();
    if (!equality_ok) {
        r.witness = equality_witness;
    }
    return r;
}

CheckResult check_identity(const AuctionDefinition& auction, const GridSpec& grid,
                           int pairs_per_piece, const QuadratureConfig& cfg)
{
    require_finite_H(auction);
    grid.validate();
    CheckResult r{"myerson_identity", false, 0.0, kIdentityTol, {}, "max Myerson-identity residual"};
    const auto ctx = grid.contexts();
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        const auto [b, nu] = ctx[i];
        std::mt19937_64 rng(mix(grid.jitter_seed, 1000 + i));
        std::vector<double> cuts = auction.breakpoints(b, nu);
        cuts.push_back(1.0);
        cuts.push_back(auction.H);
        cuts = normalize_points(std::move(cuts), auction.H);

        auto probe = [&](double s, double t) {
            if (s > t) {
                std::swap(s, t);
            }
            const double res = verify_identity(auction, b, nu, s, t, cfg);
            if (res > r.margin) {
                r.margin = res;
                r.witness = {{"s", s}, {"t", t}, {"b", b}, {"nu", static_cast<double>(nu)}};
            }
        };
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double lo = cuts[k];
            const double hi = cuts[k + 1];
            for (int j = 0; j < pairs_per_piece; ++j) {
                probe(lo + (hi - lo) * unit(rng), lo + (hi - lo) * unit(rng));
            }
        }
        for (int j = 0; j < pairs_per_piece; ++j) {
            probe(1.0 + (auction.H - 1.0) * unit(rng), 1.0 + (auction.H - 1.0) * unit(rng));
        }
    }
    r.pass = r.margin <= kIdentityTol;
    return r;
}

CheckResult witness_infeasibility(const CRParams& params)
{
    params.validate();
    const double gamma = params.gamma;
    const double rho = params.rho;
    const double u = params.u_hat;
    const double H = params.H;
    const double bound = required_alloc_lower_bound(gamma, rho, u, H);

    CheckResult r{"infeasibility_witness_cr", false, bound, 1.0, {{"bound", bound}}, ""};
    if (std::abs(bound - 1.0) <= kCrConditionTol) {
        r.note = "feasible-tight";
        return r;
    }
    if (bound < 1.0) {
        std::ostringstream msg;
        msg << "parameters are feasible (bound " << bound << " <= 1); no witness exists";
        throw PreconditionError(msg.str());
    }

    // Cheapest payments a gamma-consistent rho-robust auction may charge a
    // lone bidder: rho z below u_hat, gamma u_hat up to v, rho z beyond.
    const double v = u * (gamma / rho);
    const PiecewiseCurve floor_pay(1.0, H, {u, v}, [=](double z) {
        if (z < u) {
            return rho * z;
        }
        return z < v ? gamma * u : rho * z;
    });
    // Individual rationality at its tightest: x(1) = p(1).
    const double x1 = floor_pay(1.0);
    const double x_u = implied_allocation(floor_pay, 1.0, x1, u);
    double replay = x_u;
    r.witness.emplace_back("x_u_hat", x_u);
    if (u < H * rho / gamma) {
        const double x_v = implied_allocation(floor_pay, u, x_u, v);
        const double x_H = implied_allocation(floor_pay, v, x_v, H);
        r.witness.emplace_back("x_v", x_v);
        r.witness.emplace_back("x_H", x_H);
        replay = x_H;
    }
    r.witness.emplace_back("replayed", replay);
    r.margin = replay;
    r.pass = replay > 1.0 && bound > 1.0 && std::abs(replay - bound) <= kIdentityTol;
    r.note = "lower bound on a lone bidder's allocation";
    return r;
}

CheckResult witness_infeasibility(const RhoSpec& rho, double u_hat, double H)
{
    if (!std::isfinite(H)) {
        throw PreconditionError("the error-model witness needs a finite H");
    }
    const double sum = err_condition_sum(rho, u_hat, H);
    CheckResult r{"infeasibility_witness_err", false, sum, 1.0, {{"bound", sum}}, ""};
    if (std::abs(sum - 1.0) <= kErrConditionTol) {
        r.note = "feasible-tight";
        return r;
    }
    if (sum < 1.0) {
        std::ostringstream msg;
        msg << "robustness function is feasible (sum " << sum << " <= 1); no witness exists";
        throw PreconditionError(msg.str());
    }
    const PiecewiseCurve floor_pay(1.0, H, {u_hat}, [&rho, u_hat](double z) {
        return z < u_hat ? rho(u_hat / z) * z : rho(z / u_hat) * z;
    });
    const double x1 = floor_pay(1.0);
    const double x_u = implied_allocation(floor_pay, 1.0, x1, u_hat);
    const double x_H = implied_allocation(floor_pay, u_hat, x_u, H);
    r.witness.emplace_back("x_u_hat", x_u);
    r.witness.emplace_back("x_H", x_H);
    r.margin = x_H;
    r.pass = x_H > 1.0 && sum > 1.0 && std::abs(x_H - sum) <= kIdentityTol;
    r.note = "lower bound on a lone bidder's allocation";
    return r;
}

bool VerificationReport::overall() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string VerificationReport::to_json() const
{
    nlohmann::ordered_json j;
    j["overall"] = overall();
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["pass"] = c.pass;
        e["margin"] = c.margin;
        e["threshold"] = c.threshold;
        nlohmann::ordered_json w = nlohmann::ordered_json::object();
        for (const auto& [k, v] : c.witness) {
            w[k] = v;
        }
        e["witness"] = w;
        e["note"] = c.note;
        j["checks"].push_back(e);
    }
    return j.dump(2) + "\n";
}

VerificationReport run_suite(const AuctionDefinition& auction, const GridSpec& grid)
{
    VerificationReport rep;
    rep.checks.push_back(check_dsic(auction, grid));
    rep.checks.push_back(check_ir(auction, grid));
    rep.checks.push_back(check_monotone(auction, grid));
    rep.checks.push_back(check_feasible(auction, grid));
    rep.checks.push_back(check_guarantees(auction, auction.mode, grid));
    rep.checks.push_back(check_identity(auction, grid));
    return rep;
}

} // namespace predauction
