#include "oracles.hpp"

#include "predauction/cr_auction.hpp"
#include "predauction/errors.hpp"
#include "predauction/myerson.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace pa = predauction;

namespace {

const double e = std::exp(1.0);

double lhs(double g, double r, double u, double H)
{
    // Independent restatement of the condition's left-hand side.
    if (r == 0.0) {
        return g;
    }
    return g + r * std::log(std::max(u, H * r / g));
}

std::vector<pa::CRParams> random_feasible(oracle::Rng& rng, int n)
{
    std::vector<pa::CRParams> out;
    while (static_cast<int>(out.size()) < n) {
        const double H = rng.log_uniform(1.5, 1e4);
        const double u = rng.log_uniform(1.0, H);
        const double g = rng.uniform(0.05, 1.0);
        const double r = rng.uniform(0.0, pa::max_robust(g, u, H));
        out.push_back({g, r, u, H});
    }
    return out;
}

} // namespace

TEST(CrCondition, SuggestedPairIsFeasible)
{
    for (double H : {2.0, 10.0, 100.0}) {
        const double rho = 1.0 / (2.0 * (1.0 + std::log(H)));
        for (double u : {1.0, std::sqrt(H), H}) {
            EXPECT_TRUE(pa::cr_condition(0.5, rho, u, H));
            EXPECT_LE(pa::required_alloc_lower_bound(0.5, rho, u, H), 1.0);
        }
    }
}

TEST(CrCondition, Boundaries)
{
    EXPECT_TRUE(pa::cr_condition(1.0, 0.0, 3.0, 10.0));
    EXPECT_EQ(pa::required_alloc_lower_bound(1.0, 0.0, 3.0, 10.0), 1.0);
    EXPECT_EQ(pa::required_alloc_lower_bound(0.0, 0.0, 3.0, 10.0), 0.0);
    EXPECT_FALSE(pa::cr_condition(0.9, 0.9, e, e));
    EXPECT_NEAR(pa::required_alloc_lower_bound(0.9, 0.9, e, e), 1.8, 1e-15);
}

TEST(CrCondition, MatchesIndependentFormula)
{
    oracle::Rng rng(31);
    for (int i = 0; i < 2000; ++i) {
        const double H = rng.log_uniform(1.1, 1e6);
        const double u = rng.log_uniform(1.0, H);
        const double g = rng.uniform(0.0, 1.0);
        const double r = rng.uniform(0.0, g);
        EXPECT_NEAR(pa::required_alloc_lower_bound(g, r, u, H), lhs(g, r, u, H), 1e-14);
    }
}

TEST(CRParams, Validation)
{
    EXPECT_THROW((pa::CRParams{0.5, 0.6, 2, 10}.validate()), pa::ValidationError);
    EXPECT_THROW((pa::CRParams{1.1, 0.1, 2, 10}.validate()), pa::ValidationError);
    EXPECT_THROW((pa::CRParams{0.5, -0.1, 2, 10}.validate()), pa::ValidationError);
    EXPECT_THROW((pa::CRParams{0.5, 0.1, 11, 10}.validate()), pa::ValidationError);
    EXPECT_THROW((pa::CRParams{0.5, 0.1, 1, 1}.validate()), pa::ValidationError);
    EXPECT_THROW((pa::CRParams{0.5, 0.1, 1, INFINITY}.validate()), pa::ValidationError);
    EXPECT_THROW(pa::make_cr_auction({0.9, 0.9, e, e}), pa::ValidationError);
    EXPECT_NO_THROW(pa::make_cr_auction({0.9, 0.9, e, e}, pa::Feasibility::unchecked));
}

TEST(MaxRobust, FullConsistencyWithInformativePrediction)
{
    for (double u : {1.5, 3.0, 10.0}) {
        EXPECT_EQ(pa::max_robust(1.0, u, 10.0), 0.0);
    }
}

TEST(MaxRobust, FullConsistencyAtUHatOne)
{
    for (double H : {2.0, 10.0, 1e3}) {
        EXPECT_NEAR(pa::max_robust(1.0, 1.0, H), 1.0 / H, 1e-12);
    }
}

TEST(MaxRobust, DenseGridOracle)
{
    const double g = 0.5;
    const double H = e * e;
    const double u = 1.0;
    const int n = 1000000;
    double best = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double r = g * i / n;
        if (lhs(g, r, u, H) <= 1.0) {
            best = r;
        }
    }
    const double r = pa::max_robust(g, u, H);
    EXPECT_GE(r, best - 1e-12);
    EXPECT_LE(r, best + g / n);
    EXPECT_NEAR(0.5 + r * std::log(2.0 * e * e * r), 1.0, 1e-11);
}

TEST(MaxRobust, RejectsGammaOutOfRange)
{
    EXPECT_THROW(pa::max_robust(0.0, 1.0, 10.0), pa::ValidationError);
    EXPECT_THROW(pa::max_robust(1.2, 1.0, 10.0), pa::ValidationError);
}

TEST(Frontier, HalfConsistencyRowBeatsSuggestedPair)
{
    for (double H : {2.0, 10.0, 100.0, 1e6}) {
        for (double u : {1.0, std::sqrt(H), H}) {
            EXPECT_GE(pa::max_robust(0.5, u, H), 1.0 / (2.0 * (1.0 + std::log(H))) - 1e-12);
        }
    }
}

TEST(Frontier, LargerHStrictlyShrinksRobustness)
{
    // Only where the condition binds: while rho* = gamma the row is flat in H.
    for (double g : {0.5, 0.7, 0.9}) {
        double prev = pa::max_robust(g, 1.0, 8.0);
        ASSERT_LT(prev, g);
        for (double H : {16.0, 256.0, 65536.0}) {
            const double r = pa::max_robust(g, 1.0, H);
            EXPECT_LT(r, prev);
            prev = r;
        }
    }
}

TEST(AllocCr, ExampleValues)
{
    const pa::CRParams p{0.5, 1.0 / 6.0, e, e * e};
    EXPECT_EQ(pa::alloc_cr({1.2, 1.5, 1}, p), 0.0);
    EXPECT_NEAR(pa::alloc_cr({2.0, 1.5, 1}, p), (1.0 + std::log(4.0 / 3.0)) / 6.0, 1e-15);
    EXPECT_NEAR(pa::alloc_cr({1.5, 1.5, 2}, p), 1.0 / 18.0, 1e-15);

    // Cross-check the t = 2 value through the payment side.
    const pa::PiecewiseCurve pay(1.0, p.H, {1.5, e}, [&p](double z) { return pa::pay_cr({z, 1.5, 1}, p); });
    EXPECT_NEAR(pa::allocation_from_payment(pay, 1.5, pa::alloc_cr({1.5, 1.5, 1}, p), 2.0),
                pa::alloc_cr({2.0, 1.5, 1}, p), 1e-12);
}

TEST(PayCr, ExampleValues)
{
    const pa::CRParams p{0.5, 1.0 / 6.0, e, e * e};
    EXPECT_NEAR(pa::pay_cr({p.u_hat, 1.5, 1}, p), p.gamma * p.u_hat, 1e-15);
    EXPECT_NEAR(pa::pay_cr({2.0, 1.5, 1}, p), 1.0 / 3.0, 1e-15);
    EXPECT_EQ(pa::pay_cr({1.2, 1.5, 1}, p), 0.0);
    // Here gamma u_hat / rho exceeds H, so the flat piece runs to H.
    EXPECT_EQ(p.cap(), p.H);
    EXPECT_NEAR(pa::pay_cr({p.H, 1.5, 1}, p), p.gamma * p.u_hat, 1e-15);

    const pa::CRParams q{0.5, 0.1, 2.0, 50.0};
    const double cap = q.cap();
    EXPECT_NEAR(cap, 10.0, 1e-15);
    EXPECT_NEAR(pa::pay_cr({cap, 1.5, 1}, q), q.gamma * q.u_hat, 1e-15);
    for (double t : {cap * 1.001, 0.5 * (cap + q.H), q.H}) {
        EXPECT_NEAR(pa::pay_cr({t, 1.5, 1}, q), q.rho * t, 1e-15);
    }
}

TEST(AllocCr, TieAtPredictionAndAbove)
{
    const pa::CRParams p{0.6, 0.15, 4.0, 50.0};
    EXPECT_NEAR(pa::alloc_cr({4.0, 4.0, 2}, p), 0.2, 1e-15);
    EXPECT_NEAR(pa::pay_cr({4.0, 4.0, 2}, p), 0.8, 1e-15);
    EXPECT_NEAR(pa::alloc_cr({5.0, 4.0, 2}, p), 0.6, 1e-15);
    // b above the prediction: pure rho-log curve.
    EXPECT_NEAR(pa::alloc_cr({6.0, 5.0, 1}, p), 0.15 * (1.0 + std::log(1.2)), 1e-15);
    EXPECT_NEAR(pa::alloc_cr({5.0, 5.0, 1}, p), 0.075, 1e-15);
}

TEST(AllocCr, DegenerateParameters)
{
    // gamma == rho: the flat piece collapses and the curve is a single rho-log.
    const pa::CRParams eq{0.2, 0.2, 3.0, 20.0};
    EXPECT_NEAR(eq.cap(), 3.0, 0.0);
    for (double t : {2.0, 3.0, 3.5, 20.0}) {
        EXPECT_NEAR(pa::alloc_cr({t, 1.5, 1}, eq), 0.2 + 0.2 * std::log(t / 1.5), 1e-15);
        EXPECT_NEAR(pa::pay_cr({t, 1.5, 1}, eq), 0.2 * t, 1e-14);
    }
    // rho == 0: constant gamma from u_hat to H.
    const pa::CRParams zero{0.7, 0.0, 3.0, 20.0};
    EXPECT_EQ(zero.cap(), 20.0);
    EXPECT_EQ(pa::alloc_cr({2.0, 1.5, 1}, zero), 0.0);
    EXPECT_EQ(pa::alloc_cr({20.0, 1.5, 1}, zero), 0.7);
    EXPECT_NEAR(pa::pay_cr({20.0, 1.5, 1}, zero), 2.1, 1e-15);
}

TEST(CrProperty, MonotoneAndFeasibleOnDenseGrid)
{
    oracle::Rng rng(32);
    for (const auto& p : random_feasible(rng, 40)) {
        for (double b : {1.0, std::max(1.0, p.u_hat / 2), p.u_hat, std::min(p.H, p.u_hat * 1.7)}) {
            for (int nu : {1, 3}) {
                double prev = -1.0;
                for (double t : oracle::log_grid(1.0, p.H, 1000)) {
                    const double x = pa::alloc_cr({t, b, nu}, p);
                    EXPECT_GE(x, prev - 1e-15);
                    prev = x;
                }
                EXPECT_LE(pa::alloc_cr({p.H, b, nu}, p), 1.0 + 1e-12);
                EXPECT_LE(pa::alloc_cr({b, b, nu}, p) * (nu + 1), 1.0 + 1e-12);
            }
        }
    }
}

TEST(CrProperty, NoProfitableDeviationBruteForce)
{
    oracle::Rng rng(33);
    for (const auto& p : random_feasible(rng, 15)) {
        for (double b : {1.0, std::max(1.0, p.u_hat / 2), p.u_hat, std::min(p.H, p.u_hat * 1.7)}) {
            std::vector<double> pts = oracle::log_grid(1.0, p.H, 80);
            pts.push_back(b);
            pts.push_back(p.u_hat);
            pts.push_back(std::min(p.cap(), p.H));
            for (double v : pts) {
                const pa::AgentView tv{v, b, 1};
                const double truthful = v * pa::alloc_cr(tv, p) - pa::pay_cr(tv, p);
                EXPECT_GE(truthful, -1e-12);
                for (double z : pts) {
                    const pa::AgentView dv{z, b, 1};
                    const double dev = v * pa::alloc_cr(dv, p) - pa::pay_cr(dv, p);
                    EXPECT_LE(dev - truthful, 1e-9) << "v=" << v << " z=" << z;
                }
            }
        }
    }
}

TEST(CrProperty, ConsistencyAndRobustnessRevenue)
{
    oracle::Rng rng(34);
    for (const auto& p : random_feasible(rng, 30)) {
        EXPECT_EQ(pa::pay_cr(pa::AgentView::single(p.u_hat), p), p.gamma * p.u_hat);
        for (double t : oracle::log_grid(1.0, p.H, 200)) {
            EXPECT_GE(pa::pay_cr(pa::AgentView::single(t), p), p.rho * t * (1 - 1e-15));
        }
    }
}

TEST(CrProperty, FrontierBindingAllocationReachesOne)
{
    for (double H : {10.0, 1e3}) {
        for (double u : {1.0, 3.0, 9.0}) {
            for (double g : {0.3, 0.6, 0.9}) {
                const double r = pa::max_robust(g, u, H);
                if (r >= g) {
                    continue;
                }
                const pa::CRParams p{g, r, u, H};
                EXPECT_NEAR(pa::alloc_cr({H, 1.0, 1}, p), 1.0, 1e-8);
                EXPECT_NEAR(pa::alloc_cr(pa::AgentView::single(H), p), 1.0, 1e-8);
                EXPECT_GT(pa::required_alloc_lower_bound(g, r * 1.01, u, H), 1.0);
            }
        }
    }
}
