#pragma once

#include <functional>
#include <span>
#include <vector>

namespace predauction {

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_depth = 40;

    void validate() const;
};

/// A univariate function on [lo, hi] that is smooth between the listed
/// breakpoints. Jumps may only occur at breakpoints; the value at a jump is
/// whatever `eval` returns there (the closed end of the adjacent piece).
class PiecewiseCurve {
public:
    using Fn = std::function<double(double)>;

    PiecewiseCurve(double lo, double hi, std::vector<double> breakpoints, Fn eval);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

    double operator()(double z) const { return eval_(z); }

    /// One-sided limits, evaluated a relative 1e-12 away from z.
    double left_limit(double z) const;
    double right_limit(double z) const;

    /// alpha * f with the same domain and breakpoints.
    PiecewiseCurve scaled(double alpha) const;

    /// z -> g(z, f(z)); same domain and breakpoints.
    PiecewiseCurve map(std::function<double(double, double)> g) const;

private:
    double lo_;
    double hi_;
    std::vector<double> breakpoints_;
    Fn eval_;
};

/// Globally adaptive 15-point Gauss-Kronrod quadrature over [a, b]. The
/// interval is split at every breakpoint in (a, b) before refinement, and
/// integrand values are never requested at a or b or at a breakpoint.
/// Converges when the summed |K15 - G7| estimate is within
/// max(abs_tol, rel_tol * |value|); throws QuadratureError naming the
/// offending subinterval when a split would exceed max_depth.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints, const QuadratureConfig& cfg = {});

/// Requires lo <= a <= b <= hi.
double integrate(const PiecewiseCurve& f, double a, double b, const QuadratureConfig& cfg = {});

} // namespace predauction
