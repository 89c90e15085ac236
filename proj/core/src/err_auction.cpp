#include "predauction/err_auction.hpp"
#include "predauction/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace predauction {

void ErrParams::validate() const
{
    if (!(H > 1.0)) {
        throw ValidationError("H must be greater than 1");
    }
    if (!(u_hat >= 1.0 && u_hat <= H) || !std::isfinite(u_hat)) {
        throw ValidationError("prediction u_hat must lie in [1, H]");
    }
    if (unbounded() && rho.family() != RhoFamily::polylog) {
        throw ValidationError("unbounded valuations are only supported for the polylog family");
    }
    if (rho.eta_max() < H / u_hat || rho.eta_max() < u_hat) {
        throw ValidationError("robustness function is not defined on the whole error range");
    }
}

bool ErrParams::unbounded() const
{
    return std::isinf(H);
}

double err_condition_sum(const RhoSpec& rho, double u_hat, double H)
{
    ErrParams p{rho, u_hat, H};
    p.validate();
    if (p.unbounded()) {
        const double c1 = rho(1.0);
        return c1 * (1.0 + 2.0 * polylog_integral_closed(rho.eps()));
    }
    return rho(H / u_hat) + rho.log_integral(1.0, u_hat) + rho.log_integral(1.0, H / u_hat);
}

bool err_condition(const RhoSpec& rho, double u_hat, double H)
{
    return err_condition_sum(rho, u_hat, H) <= 1.0 + kErrConditionTol;
}

double alloc_err(const AgentView& v, const ErrParams& p)
{
    validate_view(v, p.H);
    const double t = v.t;
    const double b = v.b;
    const double u = p.u_hat;
    const RhoSpec& rho = p.rho;
    if (t < b) {
        return 0.0;
    }
    if (t == b) {
        return (u <= b ? rho(b / u) : rho(u / b)) / (v.nu + 1);
    }
    if (u <= b) {
        return rho(t / u) + rho.log_integral(b / u, t / u);
    }
    if (t < u) {
        return rho(u / t) + rho.log_integral(u / t, u / b);
    }
    return rho(t / u) + rho.log_integral(1.0, u / b) + rho.log_integral(1.0, t / u);
}

double pay_err(const AgentView& v, const ErrParams& p)
{
    validate_view(v, p.H);
    const double t = v.t;
    const double b = v.b;
    const double u = p.u_hat;
    const RhoSpec& rho = p.rho;
    if (t < b) {
        return 0.0;
    }
    if (t == b) {
        return b * ((u <= b ? rho(b / u) : rho(u / b)) / (v.nu + 1));
    }
    if (t < u) {
        return rho(u / t) * t;
    }
    return rho(t / u) * t;
}

AuctionDefinition make_err_auction(const ErrParams& p, Feasibility check)
{
    p.validate();
    if (check == Feasibility::require && !err_condition(p.rho, p.u_hat, p.H)) {
        std::ostringstream msg;
        msg << "infeasible robustness function: condition sum "
            << err_condition_sum(p.rho, p.u_hat, p.H) << " > 1";
        throw ValidationError(msg.str());
    }
    AuctionDefinition a;
    std::ostringstream name;
    name.precision(17);
    name << "err(rho=" << p.rho.tag();
    if (!std::isnan(p.rho.eps())) {
        name << ", eps=" << p.rho.eps();
    }
    name << ", u_hat=" << p.u_hat << ", H=" << p.H << ")";
    a.name = name.str();
    a.mode = GuaranteeMode::err;
    a.u_hat = p.u_hat;
    a.H = p.H;
    a.alloc_rule = [p](const AgentView& v) { return alloc_err(v, p); };
    a.pay_rule = [p](const AgentView& v) { return pay_err(v, p); };
    a.breakpoints = [u = p.u_hat, H = p.H, kinks = p.rho.kinks()](double b, int) {
        std::vector<double> pts{b, u};
        for (double k : kinks) {
            pts.push_back(u * k);
            pts.push_back(u / k);
        }
        return normalize_points(std::move(pts), H);
    };
    a.revenue_floor = [p](double t) { return p.rho(std::max(t / p.u_hat, p.u_hat / t)); };
    return a;
}

} // namespace predauction
