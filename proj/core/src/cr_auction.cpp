#include "predauction/cr_auction.hpp"
#include "predauction/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace predauction {

namespace {

void validate_ranges(double gamma, double rho, double u_hat, double H)
{
    if (!std::isfinite(H) || !(H > 1.0)) {
        throw ValidationError("H must be finite and greater than 1");
    }
    if (!(rho >= 0.0 && rho <= gamma && gamma <= 1.0)) {
        std::ostringstream msg;
        msg << "need 0 <= rho <= gamma <= 1, got gamma=" << gamma << " rho=" << rho;
        throw ValidationError(msg.str());
    }
    if (!(u_hat >= 1.0 && u_hat <= H)) {
        throw ValidationError("prediction u_hat must lie in [1, H]");
    }
}

double bound_unchecked(double gamma, double rho, double u_hat, double H)
{
    if (rho == 0.0) {
        return gamma;
    }
    return gamma + rho * std::log(std::max(u_hat, H * rho / gamma));
}

} // namespace

void CRParams::validate() const
{
    validate_ranges(gamma, rho, u_hat, H);
}

double CRParams::cap() const
{
    if (rho == 0.0) {
        return H;
    }
    // u_hat * (gamma / rho) is exactly u_hat when gamma == rho.
    return std::min(u_hat * (gamma / rho), H);
}

double required_alloc_lower_bound(double gamma, double rho, double u_hat, double H)
{
    validate_ranges(gamma, rho, u_hat, H);
    return bound_unchecked(gamma, rho, u_hat, H);
}

bool cr_condition(double gamma, double rho, double u_hat, double H)
{
    return required_alloc_lower_bound(gamma, rho, u_hat, H) <= 1.0 + kCrConditionTol;
}

double max_robust(double gamma, double u_hat, double H)
{
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw ValidationError("max_robust needs 0 < gamma <= 1");
    }
    validate_ranges(gamma, 0.0, u_hat, H);
    // rho -> rho ln max{u_hat, H rho/gamma} is non-decreasing, so the
    // feasible set is an interval [0, rho*].
    if (bound_unchecked(gamma, gamma, u_hat, H) <= 1.0) {
        return gamma;
    }
    double lo = 0.0;
    double hi = gamma;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (bound_unchecked(gamma, mid, u_hat, H) <= 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

double alloc_cr(const AgentView& v, const CRParams& p)
{
    validate_view(v, p.H);
    const double t = v.t;
    const double b = v.b;
    const double u = p.u_hat;
    if (t < b) {
        return 0.0;
    }
    if (t == b) {
        return (b == u ? p.gamma : p.rho) / (v.nu + 1);
    }
    const double cap = p.cap();
    if (u < b || (b < u && t < u)) {
        return p.rho + p.rho * std::log(t / b);
    }
    if (t <= cap) {
        return b == u ? p.gamma : p.gamma + p.rho * std::log(u / b);
    }
    return p.gamma + p.rho * std::log(t * p.rho / (b * p.gamma));
}

double pay_cr(const AgentView& v, const CRParams& p)
{
    validate_view(v, p.H);
    const double t = v.t;
    const double b = v.b;
    const double u = p.u_hat;
    if (t < b) {
        return 0.0;
    }
    if (t == b) {
        return b * ((b == u ? p.gamma : p.rho) / (v.nu + 1));
    }
    if (u < b || (b < u && t < u)) {
        return p.rho * t;
    }
    if (t <= p.cap()) {
        return p.gamma * u;
    }
    return p.rho * t;
}

AuctionDefinition make_cr_auction(const CRParams& p, Feasibility check)
{
    p.validate();
    if (check == Feasibility::require && !cr_condition(p.gamma, p.rho, p.u_hat, p.H)) {
        std::ostringstream msg;
        msg << "infeasible parameters: gamma + rho ln max{u_hat, H rho/gamma} = "
            << required_alloc_lower_bound(p.gamma, p.rho, p.u_hat, p.H) << " > 1";
        throw ValidationError(msg.str());
    }
    AuctionDefinition a;
    std::ostringstream name;
    name.precision(17);
    name << "cr(gamma=" << p.gamma << ", rho=" << p.rho << ", u_hat=" << p.u_hat << ", H=" << p.H
         << ")";
    a.name = name.str();
    a.mode = GuaranteeMode::cr;
    a.u_hat = p.u_hat;
    a.H = p.H;
    a.alloc_rule = [p](const AgentView& v) { return alloc_cr(v, p); };
    a.pay_rule = [p](const AgentView& v) { return pay_cr(v, p); };
    a.breakpoints = [p](double b, int) { return normalize_points({b, p.u_hat, p.cap()}, p.H); };
    a.revenue_floor = [p](double t) { return t == p.u_hat ? p.gamma : p.rho; };
    return a;
}

} // namespace predauction
