#pragma once

#include "predauction/auction.hpp"
#include "predauction/quadrature.hpp"

namespace predauction {

/// Payment implied by a monotone allocation curve, anchored at (s, p(s)):
///
///     p(t) = p(s) + t x(t) - s x(s) - int_s^t x(z) dz
///
/// Throws ValidationError if x decreases on a sampled grid over [s, t], and
/// PreconditionError if s == 1 and p(s) > x(1) (individual rationality).
double payment_from_allocation(const PiecewiseCurve& x, double s, double p_s, double t,
                               const QuadratureConfig& cfg = {});

/// Allocation implied by a payment curve, anchored at (s, x(s)):
///
///     x(t) = p(t)/t + int_s^t p(z)/z^2 dz + x(s) - p(s)/s
///
/// Throws InfeasibleError when the result leaves [0, 1 + kFeasibilityTol];
/// use implied_allocation to get the raw value.
double allocation_from_payment(const PiecewiseCurve& p, double s, double x_s, double t,
                               const QuadratureConfig& cfg = {});

/// Same right-hand side as allocation_from_payment, without the range check.
double implied_allocation(const PiecewiseCurve& p, double s, double x_s, double t,
                          const QuadratureConfig& cfg = {});

/// The univariate sections z -> x(z, b, nu) and z -> p(z, b, nu) on [1, H].
struct Section {
    PiecewiseCurve alloc;
    PiecewiseCurve pay;
};

Section make_section(const AuctionDefinition& auction, double b, int nu);

/// |x(t) - [p(t)/t + int_s^t p(z)/z^2 dz + x(s) - p(s)/s]| on the section
/// (b, nu). A truthful auction gives a residual at quadrature noise level.
double verify_identity(const AuctionDefinition& auction, double b, int nu, double s, double t,
                       const QuadratureConfig& cfg = {});

} // namespace predauction
