#pragma once

#include <cstddef>
#include <vector>

namespace predauction {

/// Raw bids of all agents. Every bid lies in [1, H]; H may be +infinity
/// for auctions that support unbounded valuations.
class BidProfile {
public:
    BidProfile(std::vector<double> bids, double H);

    const std::vector<double>& bids() const noexcept { return bids_; }
    double H() const noexcept { return H_; }
    std::size_t size() const noexcept { return bids_.size(); }
    double max_bid() const noexcept;

private:
    std::vector<double> bids_;
    double H_;
};

/// One agent's view of a profile: its own bid t, the highest competing bid
/// b and the number nu of competitors bidding exactly b.
///
/// A lone bidder is represented by the phantom competitor (b = 1, nu = 0):
/// nobody actually bids 1, so a tie at t = 1 is not shared.
struct AgentView {
    double t = 1.0;
    double b = 1.0;
    int nu = 1;

    static AgentView single(double t) { return AgentView{t, 1.0, 0}; }

    bool is_single() const noexcept { return nu == 0; }
};

/// Expected allocations and payments of one auction run.
struct Outcome {
    std::vector<double> alloc;
    std::vector<double> pay;
    double revenue = 0.0;
};

/// t is the view for agent `agent_index`; requires at least two bids.
AgentView reduce_profile(const BidProfile& profile, std::size_t agent_index);

/// Validates a view against [1, H]; throws ValidationError.
void validate_view(const AgentView& view, double H);

} // namespace predauction
