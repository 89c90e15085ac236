#include "predauction/myerson.hpp"
#include "predauction/errors.hpp"

#include <algorithm>
#include <cmath>

#include <sstream>

namespace predauction {

namespace {

constexpr int kMonotoneSamples = 128;
constexpr double kMonotoneTol = 1e-12;

void require_ordered(double s, double t)
{
    if (!(s <= t)) {
        throw PreconditionError("Myerson transforms need s <= t");
    }
}

void require_monotone(const PiecewiseCurve& x, double s, double t)
{
    std::vector<double> pts;
    pts.reserve(kMonotoneSamples + 1 + x.breakpoints().size());
    for (int i = 0; i <= kMonotoneSamples; ++i) {
        pts.push_back(s + (t - s) * i / kMonotoneSamples);
    }
    for (double bp : x.breakpoints()) {
        if (bp > s && bp < t) {
            pts.push_back(bp);
        }
    }
    std::sort(pts.begin(), pts.end());
    double prev = x(pts.front());
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double cur = x(pts[i]);
        if (cur < prev - kMonotoneTol) {
            std::ostringstream msg;
            msg << "allocation curve decreases between " << pts[i - 1] << " and " << pts[i];
            throw ValidationError(msg.str());
        }
        prev = cur;
    }
}

} // namespace

double payment_from_allocation(const PiecewiseCurve& x, double s, double p_s, double t,
                               const QuadratureConfig& cfg)
{
    require_ordered(s, t);
    require_monotone(x, s, t);
    const double x_s = x(s);
    if (s == 1.0 && p_s > x_s + kMonotoneTol) {
        throw PreconditionError("anchor payment at 1 exceeds the allocation (not individually rational)");
    }
    return p_s + t * x(t) - s * x_s - integrate(x, s, t, cfg);
}

double implied_allocation(const PiecewiseCurve& p, double s, double x_s, double t,
                          const QuadratureConfig& cfg)
{
    require_ordered(s, t);
    const auto over_z2 = p.map([](double z, double pz) { return pz / (z * z); });
    return p(t) / t + integrate(over_z2, s, t, cfg) + x_s - p(s) / s;
}

double allocation_from_payment(const PiecewiseCurve& p, double s, double x_s, double t,
                               const QuadratureConfig& cfg)
{
    const double x = implied_allocation(p, s, x_s, t, cfg);
    if (x < -kFeasibilityTol || x > 1.0 + kFeasibilityTol) {
        std::ostringstream msg;
        msg << "implied allocation " << x << " at t = " << t << " is outside [0, 1]";
        throw InfeasibleError(msg.str(), x);
    }
    return x;
}

Section make_section(const AuctionDefinition& auction, double b, int nu)
{
    auto bps = auction.breakpoints(b, nu);
    auto alloc = [&auction, b, nu](double z) { return auction.alloc(AgentView{z, b, nu}); };
    auto pay = [&auction, b, nu](double z) { return auction.pay(AgentView{z, b, nu}); };
    return Section{PiecewiseCurve(1.0, auction.H, bps, alloc),
                   PiecewiseCurve(1.0, auction.H, bps, pay)};
}

double verify_identity(const AuctionDefinition& auction, double b, int nu, double s, double t,
                       const QuadratureConfig& cfg)
{
    const Section sec = make_section(auction, b, nu);
    const double rhs = implied_allocation(sec.pay, s, sec.alloc(s), t, cfg);
    return std::abs(sec.alloc(t) - rhs);
}

} // namespace predauction
