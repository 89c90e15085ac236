#pragma once

#include "predauction/auction.hpp"
#include "predauction/cr_auction.hpp"
#include "predauction/quadrature.hpp"
#include "predauction/rho.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace predauction {

/// Thresholds used by the checks below.
inline constexpr double kDsicTol = 1e-9;
inline constexpr double kIrTol = 1e-12;
inline constexpr double kGuaranteeTol = 1e-9;
inline constexpr double kConsistencyTol = 1e-12;
inline constexpr double kIdentityTol = 1e-8;
inline constexpr double kMonotoneTol = 1e-12;
/// Relative distance kept between jittered grid points and breakpoints.
inline constexpr double kBreakpointOffset = 1e-7;

/// Sampling plan. Contexts are (b_samples[i], nu_samples[i % nu_samples.size()]);
/// nu = 0 stands for a lone bidder and requires b = 1.
struct GridSpec {
    int t_points = 200;
    int deviation_points = 200;
    std::vector<double> b_samples;
    std::vector<int> nu_samples;
    std::uint64_t jitter_seed = 0;

    void validate() const;
    std::vector<std::pair<double, int>> contexts() const;

    /// Four contexts around the prediction: b = 1, b below, at and above u_hat.
    static GridSpec around_prediction(double u_hat, double H, int points = 200,
                                      std::uint64_t seed = 0);
};

struct CheckResult {
    std::string name;
    bool pass = false;
    /// Worst observed value of the checked quantity (see `threshold`).
    double margin = 0.0;
    double threshold = 0.0;
    /// Named coordinates of the worst point.
    std::vector<std::pair<std::string, double>> witness;
    std::string note;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    bool overall() const;
    /// Deterministic JSON rendering.
    std::string to_json() const;
};

/// Log-spaced points over [lo, hi] with seeded jitter, moved off breakpoints,
/// plus each breakpoint and its two one-sided neighbours.
std::vector<double> sample_points(double lo, double hi, const std::vector<double>& breakpoints,
                                  int count, std::uint64_t seed);

/// Largest utility gain from misreporting, max over (v, z, b, nu) of
/// [v x(z) - p(z)] - [v x(v) - p(v)]; passes when <= kDsicTol.
CheckResult check_dsic(const AuctionDefinition& auction, const GridSpec& grid);

/// Smallest truthful utility v x(v) - p(v); passes when >= -kIrTol.
CheckResult check_ir(const AuctionDefinition& auction, const GridSpec& grid);

/// Allocation is non-decreasing in t on every sampled section.
CheckResult check_monotone(const AuctionDefinition& auction, const GridSpec& grid);

/// Total allocation (unique top bidder at t, or the whole tie at b) stays <= 1.
CheckResult check_feasible(const AuctionDefinition& auction, const GridSpec& grid);

/// Revenue ratio against the auction's floor on profiles whose top bid is a
/// grid point. cr: ratio >= floor - kGuaranteeTol, and ratio == gamma within
/// kConsistencyTol when the top bid is u_hat. err: ratio == rho(eta) within
/// kGuaranteeTol at every point.
CheckResult check_guarantees(const AuctionDefinition& auction, GuaranteeMode mode,
                             const GridSpec& grid);

/// Residual of the allocation-from-payment identity on `pairs_per_piece`
/// random (s, t) pairs inside each smooth piece of every section, plus as
/// many pairs straddling all breakpoints; passes when <= kIdentityTol.
CheckResult check_identity(const AuctionDefinition& auction, const GridSpec& grid,
                           int pairs_per_piece = 100, const QuadratureConfig& cfg = {});

/// Replays the necessity argument for parameters that violate the
/// feasibility condition: the floor payments rho t / gamma u_hat force a lone
/// bidder's allocation up to the bound. Passes when bound and replay agree
/// and exceed 1. Equality is reported as a failing "feasible-tight" entry;
/// strictly feasible parameters throw PreconditionError.
CheckResult witness_infeasibility(const CRParams& params);
CheckResult witness_infeasibility(const RhoSpec& rho, double u_hat, double H);

/// All grid checks for one auction.
VerificationReport run_suite(const AuctionDefinition& auction, const GridSpec& grid);

} // namespace predauction
