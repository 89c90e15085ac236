#pragma once

#include "predauction/auction.hpp"
#include "predauction/cr_auction.hpp"
#include "predauction/rho.hpp"

namespace predauction {

inline constexpr double kErrConditionTol = 1e-10;

struct ErrParams {
    RhoSpec rho;
    double u_hat = 1.0;
    /// +inf selects unbounded valuations (polylog family only).
    double H = 2.0;

    void validate() const;
    bool unbounded() const;
};

/// rho(H/u_hat) + int_1^{u_hat} rho(z)/z dz + int_1^{H/u_hat} rho(z)/z dz.
/// For unbounded H (polylog only) returns the analytic upper bound
/// c1 (1 + 2 int_1^inf dz/(z(1 + ln^{1+eps} z))) instead.
double err_condition_sum(const RhoSpec& rho, double u_hat, double H);

/// err_condition_sum <= 1 + kErrConditionTol.
bool err_condition(const RhoSpec& rho, double u_hat, double H);

/// The allocation x(t, b, nu). With eta-integrals L(a, c) = int_a^c rho(z)/z dz:
///   u_hat <= b < t:  rho(t/u_hat) + L(b/u_hat, t/u_hat)
///   b < t < u_hat:   rho(u_hat/t) + L(u_hat/t, u_hat/b)
///   b < u_hat <= t:  rho(t/u_hat) + L(1, u_hat/b) + L(1, t/u_hat)
/// and the tie share rho(eta(b))/(nu+1) at t = b.
double alloc_err(const AgentView& view, const ErrParams& p);

/// rho(eta(t)) t above b; b times the tie share at t = b.
double pay_err(const AgentView& view, const ErrParams& p);

AuctionDefinition make_err_auction(const ErrParams& p, Feasibility check = Feasibility::require);

} // namespace predauction
