#pragma once

#include "predauction/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace predauction {

/// Slack allowed on the total allocation before a run is declared infeasible.
inline constexpr double kFeasibilityTol = 1e-9;

/// Which revenue guarantee an auction promises.
enum class GuaranteeMode {
    cr,   ///< gamma at the prediction, rho everywhere else
    err,  ///< rho(eta) where eta = max{t/u_hat, u_hat/t}
};

/// An anonymous intuitive auction. Both rules see only (t, b, nu); the
/// parameter block lives in the closures and is immutable, so a definition
/// can be shared freely between threads.
struct AuctionDefinition {
    using Rule = std::function<double(const AgentView&)>;
    using SectionPoints = std::function<std::vector<double>(double b, int nu)>;
    using Floor = std::function<double(double t)>;

    std::string name;
    GuaranteeMode mode = GuaranteeMode::cr;
    double u_hat = 1.0;
    double H = 2.0;

    Rule alloc_rule;
    Rule pay_rule;
    /// Points of [1, H] where the section t -> x(t, b, nu) jumps or changes
    /// formula, sorted and deduplicated.
    SectionPoints breakpoints;
    /// Required revenue-over-highest-valuation ratio when the top bid is t.
    Floor revenue_floor;

    double alloc(const AgentView& v) const { return alloc_rule(v); }
    double pay(const AgentView& v) const { return pay_rule(v); }
};

/// Runs the auction in expectation. Agents below the top bid get (0, 0).
/// Throws InfeasibleError when the allocations sum past 1 + kFeasibilityTol.
Outcome run_auction(const AuctionDefinition& auction, const BidProfile& profile);

/// Expected revenue divided by the highest bid.
double revenue_ratio(const AuctionDefinition& auction, const BidProfile& profile);

/// Draws a winner from the outcome's allocation probabilities. Residual
/// probability means the item stays unsold (std::nullopt).
std::optional<std::size_t> sample_winner(const Outcome& outcome, std::uint64_t seed);

/// x = p = 0 everywhere.
AuctionDefinition make_zero_auction(double u_hat, double H);

/// Helper for building section breakpoint lists: keeps points in [1, H],
/// sorts and removes duplicates.
std::vector<double> normalize_points(std::vector<double> pts, double H);

} // namespace predauction
