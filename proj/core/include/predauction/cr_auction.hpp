#pragma once

#include "predauction/auction.hpp"

namespace predauction {

/// Slack on the feasibility inequality gamma + rho ln max{u_hat, H rho/gamma} <= 1.
inline constexpr double kCrConditionTol = 1e-12;

/// Consistency/robustness targets for a prediction u_hat of the top bid.
struct CRParams {
    double gamma = 0.0;
    double rho = 0.0;
    double u_hat = 1.0;
    double H = 2.0;

    /// Range checks only: 0 <= rho <= gamma <= 1, 1 <= u_hat <= H, 1 < H < inf.
    void validate() const;

    /// min{gamma u_hat / rho, H}; H when rho == 0.
    double cap() const;
};

/// gamma + rho ln max{u_hat, H rho / gamma}, with the rho = 0 term taken as 0.
/// Any gamma-consistent rho-robust intuitive auction must allocate at least
/// this much to a lone bidder at its binding point, so a value above 1
/// proves no such auction exists.
double required_alloc_lower_bound(double gamma, double rho, double u_hat, double H);

/// True when required_alloc_lower_bound <= 1 + kCrConditionTol.
bool cr_condition(double gamma, double rho, double u_hat, double H);

/// Largest rho in [0, gamma] that keeps the condition true, by bisection to
/// an absolute 1e-12. Requires 0 < gamma <= 1.
double max_robust(double gamma, double u_hat, double H);

/// The allocation x(t, b, nu). Piece layout for b < u_hat:
///   [1, b): 0;  b: rho/(nu+1);  (b, u_hat): rho + rho ln(t/b);
///   [u_hat, cap]: gamma + rho ln(u_hat/b);  (cap, H]: gamma + rho ln(t rho / (b gamma)).
/// For b == u_hat the tie share is gamma/(nu+1) and the flat piece starts
/// right after u_hat; for b > u_hat only the rho-log curve remains.
double alloc_cr(const AgentView& view, const CRParams& p);

/// Payment matching alloc_cr: b times the tie share at t = b, gamma u_hat on
/// the flat piece, rho t everywhere else above b.
double pay_cr(const AgentView& view, const CRParams& p);

enum class Feasibility { require, unchecked };

/// Wraps alloc_cr/pay_cr. With Feasibility::require, throws ValidationError
/// unless cr_condition holds.
AuctionDefinition make_cr_auction(const CRParams& p, Feasibility check = Feasibility::require);

} // namespace predauction
