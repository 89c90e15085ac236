#include "predauction/rho.hpp"
#include "predauction/errors.hpp"
#include "predauction/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace predauction {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGridTol = 1e-12;
// Validation grid stops here for unbounded requirements.
constexpr double kUnboundedGridEnd = 1e100;

const QuadratureConfig kFallbackQuad{1e-15, 1e-14, 60};

double safe_log(double eta)
{
    return std::max(0.0, std::log(eta));
}

// int_{w0}^{w1} dw / (1 + w^p) for 0 <= w0 <= w1.
double polylog_kernel_integral(double p, double w0, double w1)
{
    if (p == 2.0) {
        return std::atan(w1) - std::atan(w0);
    }
    auto f = [p](double w) { return 1.0 / (1.0 + std::pow(w, p)); };
    const double bp[] = {1.0};
    return integrate(f, w0, w1, bp, kFallbackQuad);
}

} // namespace

std::string to_string(RhoFamily f)
{
    switch (f) {
    case RhoFamily::polylog: return "polylog";
    case RhoFamily::log: return "log";
    case RhoFamily::sublog: return "sublog";
    case RhoFamily::constant: return "constant";
    case RhoFamily::tabulated: return "tabulated";
    case RhoFamily::custom: return "custom";
    }
    return "unknown";
}

RhoFamily parse_family(const std::string& name)
{
    if (name == "polylog") {
        return RhoFamily::polylog;
    }
    if (name == "log") {
        return RhoFamily::log;
    }
    if (name == "sublog") {
        return RhoFamily::sublog;
    }
    throw ValidationError("unknown family '" + name + "' (expected polylog, log or sublog)");
}

RhoSpec::RhoSpec(RhoFamily family, ValueFn value, LogIntegralFn log_integral, double eta_max,
                 double eps, double H)
    : family_(family),
      value_(std::move(value)),
      log_integral_(std::move(log_integral)),
      eta_max_(eta_max),
      eps_(eps),
      H_(H)
{
    if (!value_) {
        throw ValidationError("robustness function needs a value callback");
    }
    if (!(eta_max_ >= 1.0)) {
        throw ValidationError("robustness function domain must include [1, eta_max] with eta_max >= 1");
    }
    validate();
}

RhoSpec RhoSpec::with_kinks(std::vector<double> kinks) const
{
    RhoSpec out = *this;
    std::sort(kinks.begin(), kinks.end());
    kinks.erase(std::remove_if(kinks.begin(), kinks.end(),
                               [this](double k) { return !(k > 1.0 && k < eta_max_); }),
                kinks.end());
    kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
    out.kinks_ = std::move(kinks);
    return out;
}

double RhoSpec::log_integral(double a, double b) const
{
    if (!(a >= 1.0 && b >= 1.0)) {
        throw PreconditionError("log_integral bounds must be >= 1");
    }
    if (a == b) {
        return 0.0;
    }
    if (b < a) {
        return -log_integral(b, a);
    }
    if (log_integral_) {
        return log_integral_(a, b);
    }
    // z = e^w turns rho(z)/z dz into rho(e^w) dw.
    auto f = [this](double w) { return value_(std::exp(w)); };
    return integrate(f, std::log(a), std::log(b), {}, kFallbackQuad);
}

void RhoSpec::validate(int samples) const
{
    const double end = std::min(eta_max_, kUnboundedGridEnd);
    const double log_end = std::log(end);
    double prev_eta = 1.0;
    double prev_rho = value_(1.0);
    auto fail = [](const std::string& what, double eta) {
        std::ostringstream msg;
        msg << "robustness function " << what << " at eta = " << eta;
        throw ValidationError(msg.str());
    };
    if (!(prev_rho >= 0.0 && prev_rho <= 1.0)) {
        fail("leaves [0, 1]", 1.0);
    }
    for (int i = 1; i < samples; ++i) {
        const double eta = i + 1 == samples ? end : std::exp(log_end * i / (samples - 1));
        if (eta <= prev_eta) {
            continue;
        }
        const double r = value_(eta);
        if (!(r >= 0.0 && r <= 1.0)) {
            fail("leaves [0, 1]", eta);
        }
        if (r > prev_rho + kGridTol) {
            fail("increases", eta);
        }
        if (eta * r < prev_eta * prev_rho * (1.0 - kGridTol) - kGridTol) {
            fail("has eta * rho(eta) decreasing", eta);
        }
        prev_eta = eta;
        prev_rho = r;
    }
}

RhoSpec make_family(RhoFamily which, double eps, double H)
{
    if (!(H > 1.0)) {
        throw ValidationError("H must be greater than 1");
    }
    const bool unbounded = std::isinf(H);
    switch (which) {
    case RhoFamily::polylog: {
        if (!(eps > 0.0 && eps <= 1.0)) {
            throw ValidationError("polylog family needs eps in (0, 1]");
        }
        const double c1 = 1.0 / (kPi / eps + 1.0);
        const double p = 1.0 + eps;
        auto value = [c1, p](double eta) { return c1 / (1.0 + std::pow(safe_log(eta), p)); };
        auto integral = [c1, p](double a, double b) {
            return c1 * polylog_kernel_integral(p, safe_log(a), safe_log(b));
        };
        return RhoSpec(which, value, integral, H, eps, H);
    }
    case RhoFamily::log: {
        if (unbounded) {
            throw ValidationError("log family needs a finite H");
        }
        const double c = 1.0 / (1.0 + 2.0 * std::log(1.0 + std::log(H)));
        auto value = [c](double eta) { return c / (1.0 + safe_log(eta)); };
        auto integral = [c](double a, double b) {
            return c * (std::log1p(safe_log(b)) - std::log1p(safe_log(a)));
        };
        return RhoSpec(which, value, integral, H, std::numeric_limits<double>::quiet_NaN(), H);
    }
    case RhoFamily::sublog: {
        if (unbounded) {
            throw ValidationError("sublog family needs a finite H");
        }
        if (!(eps > 0.0 && eps < 1.0)) {
            throw ValidationError("sublog family needs eps in (0, 1)");
        }
        const double c = (1.0 - eps) / (2.0 * std::pow(1.0 + std::log(H), 1.0 - eps));
        auto value = [c, eps](double eta) { return c * std::pow(1.0 + safe_log(eta), -eps); };
        auto integral = [c, eps](double a, double b) {
            const double q = 1.0 - eps;
            return c * (std::pow(1.0 + safe_log(b), q) - std::pow(1.0 + safe_log(a), q)) / q;
        };
        return RhoSpec(which, value, integral, H, eps, H);
    }
    default:
        throw ValidationError("make_family only builds polylog, log and sublog");
    }
}

RhoSpec make_constant(double c)
{
    if (!(c >= 0.0 && c <= 1.0)) {
        throw ValidationError("constant robustness must lie in [0, 1]");
    }
    auto value = [c](double) { return c; };
    auto integral = [c](double a, double b) { return c * std::log(b / a); };
    return RhoSpec(RhoFamily::constant, value, integral, std::numeric_limits<double>::infinity());
}

RhoSpec make_tabulated(std::vector<std::pair<double, double>> knots)
{
    if (knots.empty()) {
        throw ValidationError("tabulated robustness needs at least one knot");
    }
    if (knots.front().first != 1.0) {
        throw ValidationError("tabulated robustness must start at eta = 1");
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const auto [eta, r] = knots[i];
        if (!std::isfinite(eta) || !(r >= 0.0 && r <= 1.0)) {
            throw ValidationError("tabulated robustness values must lie in [0, 1]");
        }
        if (i == 0) {
            continue;
        }
        const auto [peta, pr] = knots[i - 1];
        std::ostringstream where;
        where << " between eta = " << peta << " and eta = " << eta;
        if (!(eta > peta)) {
            throw ValidationError("tabulated eta values must be strictly increasing" + where.str());
        }
        if (r > pr) {
            throw ValidationError("tabulated robustness increases" + where.str());
        }
        if (eta * r < peta * pr) {
            throw ValidationError("tabulated eta * rho(eta) decreases" + where.str());
        }
    }
    const bool all_zero = std::all_of(knots.begin(), knots.end(), [](auto k) { return k.second == 0.0; });
    if (!all_zero && knots.back().second == 0.0) {
        // eta*rho non-decreasing with a trailing zero forces every knot to zero.
        throw ValidationError("tabulated eta * rho(eta) decreases to zero");
    }

    // Exponent of the power law on each segment; 0 past the last knot.
    std::vector<double> slope(knots.size(), 0.0);
    if (!all_zero) {
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            slope[i] = std::log(knots[i + 1].second / knots[i].second)
                       / std::log(knots[i + 1].first / knots[i].first);
        }
    }

    auto segment = [knots](double eta) {
        auto it = std::upper_bound(knots.begin(), knots.end(), eta,
                                   [](double e, const auto& k) { return e < k.first; });
        return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - knots.begin() - 1));
    };
    auto value = [knots, slope, segment, all_zero](double eta) {
        if (all_zero) {
            return 0.0;
        }
        const std::size_t i = segment(eta);
        return knots[i].second * std::pow(eta / knots[i].first, slope[i]);
    };
    auto integral = [knots, slope, segment, all_zero](double a, double b) {
        if (all_zero) {
            return 0.0;
        }
        double total = 0.0;
        double lo = a;
        while (lo < b) {
            const std::size_t i = segment(lo);
            const double hi = i + 1 < knots.size() ? std::min(b, knots[i + 1].first) : b;
            const double k = slope[i];
            const double start = knots[i].second * std::pow(lo / knots[i].first, k);
            const double span = std::log(hi / lo);
            total += k == 0.0 ? start * span : start * std::expm1(k * span) / k;
            lo = hi;
        }
        return total;
    };
    std::vector<double> etas;
    for (const auto& k : knots) {
        etas.push_back(k.first);
    }
    return RhoSpec(RhoFamily::tabulated, value, integral, std::numeric_limits<double>::infinity())
        .with_kinks(std::move(etas));
}

double polylog_integral_closed(double eps)
{
    if (!(eps > 0.0 && eps <= 1.0)) {
        throw ValidationError("eps must lie in (0, 1]");
    }
    return kPi / (1.0 + eps) / std::sin(kPi * eps / (1.0 + eps));
}

CscIdentity csc_identity_check(double eps)
{
    CscIdentity out;
    out.closed = polylog_integral_closed(eps);

    // In w = ln z the integrand is 1/(1 + w^{1+eps}); its tail past W is below
    // W^{-eps}/eps. Budget half of 1e-7 for it.
    constexpr double kTail = 5e-8;
    const double log10_w = std::log10(1.0 / (eps * kTail)) / eps;
    if (!(log10_w < 300.0)) {
        std::ostringstream msg;
        msg << "eps = " << eps << " needs truncation at ln z = 1e" << log10_w
            << ", beyond double range";
        throw PreconditionError(msg.str());
    }
    const double W = std::pow(10.0, log10_w);
    out.log_upper_limit = W;

    std::vector<double> cuts;
    for (double c = 1.0; c < W; c *= 2.0) {
        cuts.push_back(c);
    }
    const double p = 1.0 + eps;
    auto f = [p](double w) { return 1.0 / (1.0 + std::pow(w, p)); };
    out.numeric = integrate(f, 0.0, W, cuts, QuadratureConfig{1e-12, 1e-13, 60});
    return out;
}

} // namespace predauction
