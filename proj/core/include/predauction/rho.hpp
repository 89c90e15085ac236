#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace predauction {

enum class RhoFamily {
    polylog,    ///< 1 / ((pi/eps + 1)(1 + ln^{1+eps} eta)), eps in (0, 1]
    log,        ///< 1 / (1 + 2 ln(1 + ln H)) * 1 / (1 + ln eta)
    sublog,     ///< (1 - eps) / (2 (1 + ln H)^{1-eps}) * (1 + ln eta)^{-eps}, eps in (0, 1)
    constant,
    tabulated,
    custom,
};

std::string to_string(RhoFamily f);
/// Accepts "polylog", "log", "sublog"; throws ValidationError otherwise.
RhoFamily parse_family(const std::string& name);

/// A robustness requirement eta -> rho(eta) on [1, eta_max]. rho must be
/// non-increasing and eta * rho(eta) non-decreasing; both are checked on a
/// 1000-point log grid when the object is built. Immutable once built.
class RhoSpec {
public:
    using ValueFn = std::function<double(double)>;
    using LogIntegralFn = std::function<double(double, double)>;

    /// log_integral may be empty, in which case int rho(z)/z dz is computed
    /// by quadrature over ln z. eta_max is +inf for unbounded requirements.
    RhoSpec(RhoFamily family, ValueFn value, LogIntegralFn log_integral, double eta_max,
            double eps = std::numeric_limits<double>::quiet_NaN(),
            double H = std::numeric_limits<double>::quiet_NaN());

    double operator()(double eta) const { return value_(eta); }

    /// int_a^b rho(z)/z dz for 1 <= a, b (negative when b < a).
    double log_integral(double a, double b) const;

    RhoFamily family() const noexcept { return family_; }
    std::string tag() const { return to_string(family_); }
    double eps() const noexcept { return eps_; }
    double H() const noexcept { return H_; }
    double eta_max() const noexcept { return eta_max_; }
    /// Points in (1, eta_max) where rho is not smooth (tabulated knots).
    const std::vector<double>& kinks() const noexcept { return kinks_; }
    RhoSpec with_kinks(std::vector<double> kinks) const;

    /// Monotonicity and range checks on `samples` log-spaced points;
    /// throws ValidationError at the first violation.
    void validate(int samples = 1000) const;

private:
    RhoFamily family_;
    ValueFn value_;
    LogIntegralFn log_integral_;
    double eta_max_;
    double eps_;
    double H_;
    std::vector<double> kinks_;
};

/// One of the three closed-form families. H may be +inf only for polylog.
RhoSpec make_family(RhoFamily which, double eps, double H);

/// rho(eta) = c for all eta >= 1.
RhoSpec make_constant(double c);

/// Tabulated (eta, rho) knots with power-law interpolation between knots
/// (log rho linear in log eta) and a flat extension past the last knot.
/// The first knot must be eta = 1. Power-law pieces keep both monotonicity
/// requirements whenever the knots satisfy them.
RhoSpec make_tabulated(std::vector<std::pair<double, double>> knots);

/// int_1^inf dz / (z (1 + ln^{1+eps} z)) = (pi/(1+eps)) csc(pi eps/(1+eps)).
double polylog_integral_closed(double eps);

struct CscIdentity {
    double numeric = 0.0;
    double closed = 0.0;
    /// ln of the truncation point used for the numeric integral.
    double log_upper_limit = 0.0;
};

/// Truncated quadrature of the integral above (tail below 1e-7) next to its
/// closed form. Throws PreconditionError when the truncation point would
/// overflow a double (very small eps); the message names the required limit.
CscIdentity csc_identity_check(double eps);

} // namespace predauction
