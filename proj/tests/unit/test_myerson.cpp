#include "oracles.hpp"

#include "predauction/cr_auction.hpp"
#include "predauction/err_auction.hpp"
#include "predauction/errors.hpp"
#include "predauction/myerson.hpp"
#include "predauction/rho.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace pa = predauction;

namespace {

const double e = std::exp(1.0);

} // namespace

TEST(PaymentFromAllocation, ConstantAllocationKeepsAnchorPayment)
{
    const pa::PiecewiseCurve x(1.0, 10.0, {}, [](double) { return 0.37; });
    EXPECT_NEAR(pa::payment_from_allocation(x, 2.0, 0.5, 9.0), 0.5, 1e-12);
}

TEST(PaymentFromAllocation, RhoLogCurveGivesRhoT)
{
    const double rho = 1.0 / 6.0;
    const double b = 1.5;
    const int nu = 1;
    const pa::PiecewiseCurve x(1.0, 10.0, {b}, [=](double z) {
        if (z < b) {
            return 0.0;
        }
        return z == b ? rho / (nu + 1) : rho + rho * std::log(z / b);
    });
    for (double t : {2.0, 3.7, 10.0}) {
        EXPECT_NEAR(pa::payment_from_allocation(x, b, rho * b / (nu + 1), t), rho * t, 1e-12);
    }
    // The (b, u_hat) payment row: rho t, not rho b.
    EXPECT_NEAR(pa::payment_from_allocation(x, b, rho * b / (nu + 1), 2.0), 1.0 / 3.0, 1e-12);
}

TEST(PaymentFromAllocation, ErrorAuctionAbovePrediction)
{
    const double H = 100.0;
    const double u_hat = 3.0;
    const double b = 5.0;
    const int nu = 2;
    const pa::RhoSpec rho = pa::make_family(pa::RhoFamily::polylog, 0.5, H);
    const pa::PiecewiseCurve x(1.0, H, {b}, [&](double z) {
        if (z < b) {
            return 0.0;
        }
        if (z == b) {
            return rho(b / u_hat) / (nu + 1);
        }
        return rho(z / u_hat) + rho.log_integral(b / u_hat, z / u_hat);
    });
    const pa::QuadratureConfig cfg{1e-13, 1e-12, 50};
    for (double t : {6.0, 20.0, 100.0}) {
        const double p = pa::payment_from_allocation(x, b, b * rho(b / u_hat) / (nu + 1), t, cfg);
        EXPECT_NEAR(p, rho(t / u_hat) * t, 1e-9);
    }
}

TEST(PaymentFromAllocation, RejectsNonMonotoneAndIrViolations)
{
    const pa::PiecewiseCurve bump(1.0, 10.0, {}, [](double z) { return 0.5 - 0.01 * z; });
    EXPECT_THROW(pa::payment_from_allocation(bump, 1.0, 0.0, 5.0), pa::ValidationError);
    const pa::PiecewiseCurve flat(1.0, 10.0, {}, [](double) { return 0.2; });
    EXPECT_THROW(pa::payment_from_allocation(flat, 1.0, 0.3, 5.0), pa::PreconditionError);
    EXPECT_THROW(pa::payment_from_allocation(flat, 5.0, 0.0, 2.0), pa::PreconditionError);
}

TEST(AllocationFromPayment, LinearPaymentGivesRhoLog)
{
    const double rho = 0.2;
    const double b = 2.0;
    const int nu = 3;
    const pa::PiecewiseCurve p(1.0, 20.0, {b}, [=](double z) {
        if (z < b) {
            return 0.0;
        }
        return z == b ? rho * b / (nu + 1) : rho * z;
    });
    for (double t : {2.5, 8.0, 20.0}) {
        EXPECT_NEAR(pa::allocation_from_payment(p, b, rho / (nu + 1), t), rho + rho * std::log(t / b),
                    1e-12);
    }
}

TEST(AllocationFromPayment, ZeroPaymentKeepsAnchor)
{
    const pa::PiecewiseCurve zero(1.0, 20.0, {}, [](double) { return 0.0; });
    EXPECT_EQ(pa::allocation_from_payment(zero, 2.0, 0.4, 15.0), 0.4);
}

TEST(AllocationFromPayment, FlatPaymentIntegralTerm)
{
    const double gamma = 0.5;
    const double rho = 0.1;
    const double u_hat = 2.0;
    const double v = gamma * u_hat / rho;
    const pa::PiecewiseCurve p(1.0, 20.0, {u_hat}, [=](double) { return gamma * u_hat; });
    const double x = pa::implied_allocation(p, u_hat, 0.0, v);
    const double integral_term = x - (p(v) / v - p(u_hat) / u_hat);
    EXPECT_NEAR(integral_term, gamma - gamma * u_hat / v, 1e-12);
    EXPECT_NEAR(integral_term, gamma - rho, 1e-12);
}

TEST(AllocationFromPayment, OutOfRangeIsInfeasibility)
{
    const pa::PiecewiseCurve p(1.0, 20.0, {}, [](double z) { return 0.9 * z; });
    EXPECT_THROW(pa::allocation_from_payment(p, 1.0, 0.9, 20.0), pa::InfeasibleError);
    EXPECT_GT(pa::implied_allocation(p, 1.0, 0.9, 20.0), 1.0);
}

namespace {

/// Allocation section x(z) = a0 + a1 ln z + a2 z^{c} jumps at j; random
/// non-negative coefficients keep it monotone.
pa::PiecewiseCurve random_allocation(oracle::Rng& rng, double H)
{
    const double j = rng.log_uniform(1.5, H / 1.5);
    const double a0 = rng.uniform(0.0, 0.2);
    const double a1 = rng.uniform(0.0, 0.1);
    const double a2 = rng.uniform(0.0, 0.05);
    const double c = rng.uniform(0.1, 0.5);
    const double jump = rng.uniform(0.0, 0.2);
    return pa::PiecewiseCurve(1.0, H, {j}, [=](double z) {
        return a0 + a1 * std::log(z) + a2 * std::pow(z, c) / std::pow(H, c) + (z >= j ? jump : 0.0);
    });
}

} // namespace

TEST(MyersonProperty, RoundTripReproducesAllocation)
{
    oracle::Rng rng(21);
    const double H = 50.0;
    for (int trial = 0; trial < 5; ++trial) {
        const pa::PiecewiseCurve x = random_allocation(rng, H);
        const double j = x.breakpoints().front();
        const double p1 = 0.5 * x(1.0);
        const pa::PiecewiseCurve p(1.0, H, x.breakpoints(),
                                   [&x, p1](double t) { return pa::payment_from_allocation(x, 1.0, p1, t); });
        // 100 points in each smooth piece.
        for (auto [lo, hi] : {std::pair{1.0, j}, std::pair{j, H}}) {
            for (int k = 0; k < 100; ++k) {
                const double t = rng.uniform(lo, hi);
                if (t == j) {
                    continue;
                }
                EXPECT_NEAR(pa::implied_allocation(p, 1.0, x(1.0), t), x(t), 1e-8);
            }
        }
    }
}

TEST(MyersonProperty, TransformsAreLinear)
{
    oracle::Rng rng(22);
    const double H = 30.0;
    for (int trial = 0; trial < 20; ++trial) {
        const pa::PiecewiseCurve x = random_allocation(rng, H);
        const double alpha = rng.uniform(0.1, 0.9);
        const double s = rng.uniform(1.0, 10.0);
        const double t = rng.uniform(s, H);
        const double ps = 0.1;
        EXPECT_NEAR(pa::payment_from_allocation(x.scaled(alpha), s, alpha * ps, t),
                    alpha * pa::payment_from_allocation(x, s, ps, t), 1e-10);
        const pa::PiecewiseCurve p = x.map([](double z, double fz) { return z * fz * 0.5; });
        EXPECT_NEAR(pa::implied_allocation(p.scaled(alpha), s, alpha * 0.3, t),
                    alpha * pa::implied_allocation(p, s, 0.3, t), 1e-10);
    }
}

TEST(MyersonProperty, IrBoundaryOnConstructedSections)
{
    const pa::CRParams cr{0.5, 1.0 / 6.0, e, e * e};
    const pa::ErrParams err{pa::make_family(pa::RhoFamily::sublog, 0.5, 100.0), 4.0, 100.0};
    const std::vector<pa::AuctionDefinition> auctions = {pa::make_cr_auction(cr), pa::make_err_auction(err)};
    for (const auto& auction : auctions) {
        for (auto [b, nu] : {std::pair{1.0, 0}, std::pair{1.0, 1}, std::pair{1.3, 2}, std::pair{5.0, 1}}) {
            if (b > auction.H) {
                continue;
            }
            const pa::Section s = pa::make_section(auction, b, nu);
            EXPECT_GE(s.alloc(1.0) - s.pay(1.0), -1e-12);
        }
    }
}

TEST(VerifyIdentity, CrAuctionWithinSmoothPieces)
{
    const pa::CRParams p{0.5, 0.1, 2.0, 50.0};
    const auto auction = pa::make_cr_auction(p);
    const double b = 1.5;
    const double cap = p.cap();
    ASSERT_LT(cap, p.H);
    for (auto [s, t] : {std::pair{1.6, 2.5}, std::pair{2.0, cap * 0.99}, std::pair{cap * 1.01, p.H}}) {
        EXPECT_LT(pa::verify_identity(auction, b, 1, s, t), 1e-10);
    }
}

TEST(VerifyIdentity, ErrorAuctionStraddlingPrediction)
{
    const pa::ErrParams p{pa::make_family(pa::RhoFamily::polylog, 1.0, 100.0), 5.0, 100.0};
    const auto auction = pa::make_err_auction(p);
    for (auto [s, t] : {std::pair{2.5, 9.0}, std::pair{1.1, 100.0}, std::pair{4.99, 5.01}}) {
        EXPECT_LT(pa::verify_identity(auction, 2.0, 1, s, t), 1e-8);
    }
}

TEST(VerifyIdentity, CorruptedPaymentLeavesResidual)
{
    const pa::CRParams p{0.5, 1.0 / 6.0, e, e * e};
    pa::AuctionDefinition bad = pa::make_cr_auction(p);
    const auto pay = bad.pay_rule;
    bad.pay_rule = [pay](const pa::AgentView& v) { return 1.01 * pay(v); };
    // Linear in p: the residual is 1% of the implied allocation.
    const double r = pa::verify_identity(bad, 1.0, 1, 1.0, p.H);
    EXPECT_GT(r, 1e-3);
}
