#include "predauction/auction.hpp"
#include "predauction/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace predauction {

BidProfile::BidProfile(std::vector<double> bids, double H)
    : bids_(std::move(bids)), H_(H)
{
    if (!(H_ > 1.0)) {
        throw ValidationError("H must be greater than 1");
    }
    if (bids_.empty()) {
        throw ValidationError("a bid profile needs at least one bid");
    }
    for (std::size_t i = 0; i < bids_.size(); ++i) {
        const double v = bids_[i];
        if (!std::isfinite(v) || v < 1.0 || v > H_) {
            std::ostringstream msg;
            msg << "bid " << i << " = " << v << " is outside [1, " << H_ << "]";
            throw ValidationError(msg.str());
        }
    }
}

double BidProfile::max_bid() const noexcept
{
    return *std::max_element(bids_.begin(), bids_.end());
}

AgentView reduce_profile(const BidProfile& profile, std::size_t agent_index)
{
    const auto& bids = profile.bids();
    if (agent_index >= bids.size()) {
        throw ValidationError("agent index out of range");
    }
    if (bids.size() < 2) {
        throw PreconditionError("reduce_profile needs at least two bids; use AgentView::single");
    }
    AgentView view;
    view.t = bids[agent_index];
    double best = 0.0;
    int count = 0;
    for (std::size_t j = 0; j < bids.size(); ++j) {
        if (j == agent_index) {
            continue;
        }
        if (bids[j] > best) {
            best = bids[j];
            count = 1;
        } else if (bids[j] == best) {
            ++count;
        }
    }
    view.b = best;
    view.nu = count;
    return view;
}

void validate_view(const AgentView& view, double H)
{
    auto in_range = [H](double v) { return std::isfinite(v) && v >= 1.0 && v <= H; };
    if (!in_range(view.t) || !in_range(view.b)) {
        std::ostringstream msg;
        msg << "agent view (t=" << view.t << ", b=" << view.b << ") is outside [1, " << H << "]";
        throw ValidationError(msg.str());
    }
    if (view.nu < 0 || (view.nu == 0 && view.b != 1.0)) {
        throw ValidationError("agent view multiplicity must be >= 1 (or 0 for a lone bidder)");
    }
}

Outcome run_auction(const AuctionDefinition& auction, const BidProfile& profile)
{
    for (double v : profile.bids()) {
        if (v > auction.H) {
            throw ValidationError("bid exceeds the auction's upper bound H");
        }
    }
    const std::size_t n = profile.size();
    const double top = profile.max_bid();

    Outcome out;
    out.alloc.assign(n, 0.0);
    out.pay.assign(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (profile.bids()[i] != top) {
            continue;
        }
        const AgentView view = n == 1 ? AgentView::single(top) : reduce_profile(profile, i);
        out.alloc[i] = auction.alloc(view);
        out.pay[i] = auction.pay(view);
        total += out.alloc[i];
    }
    if (total > 1.0 + kFeasibilityTol) {
        std::ostringstream msg;
        msg << "infeasible allocation: total " << total << " exceeds 1 in auction '"
            << auction.name << "'";
        throw InfeasibleError(msg.str(), total);
    }
    for (double p : out.pay) {
        out.revenue += p;
    }
    return out;
}

double revenue_ratio(const AuctionDefinition& auction, const BidProfile& profile)
{
    return run_auction(auction, profile).revenue / profile.max_bid();
}

std::optional<std::size_t> sample_winner(const Outcome& outcome, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    // 53 random mantissa bits; avoids std::uniform_real_distribution, whose
    // output differs between standard libraries.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double acc = 0.0;
    for (std::size_t i = 0; i < outcome.alloc.size(); ++i) {
        acc += outcome.alloc[i];
        if (u < acc) {
            return i;
        }
    }
    return std::nullopt;
}

AuctionDefinition make_zero_auction(double u_hat, double H)
{
    AuctionDefinition a;
    a.name = "zero";
    a.mode = GuaranteeMode::cr;
    a.u_hat = u_hat;
    a.H = H;
    a.alloc_rule = [](const AgentView&) { return 0.0; };
    a.pay_rule = [](const AgentView&) { return 0.0; };
    a.breakpoints = [H](double b, int) { return normalize_points({b}, H); };
    a.revenue_floor = [](double) { return 0.0; };
    return a;
}

std::vector<double> normalize_points(std::vector<double> pts, double H)
{
    std::erase_if(pts, [H](double p) { return !(p >= 1.0 && p <= H); });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

} // namespace predauction
