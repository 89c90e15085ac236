#include "predauction/quadrature.hpp"
#include "predauction/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>

namespace predauction {

namespace {

// Kronrod abscissae on [-1, 1] (non-negative half); odd indices are the
// 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Hard cap on refinements; each costs 30 integrand evaluations.
constexpr int kMaxSegments = 100000;

struct Segment {
    double lo;
    double hi;
    double value;
    double error;
    int depth;

    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double lo, double hi, int depth)
{
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * sum;
        if (j % 2 == 1) {
            gauss += kWg[j / 2] * sum;
        }
    }
    kronrod *= half;
    gauss *= half;
    return Segment{lo, hi, kronrod, std::abs(kronrod - gauss), depth};
}

} // namespace

void QuadratureConfig::validate() const
{
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
        throw ValidationError("quadrature tolerances must be positive");
    }
    if (max_depth < 1) {
        throw ValidationError("quadrature max_depth must be at least 1");
    }
}

PiecewiseCurve::PiecewiseCurve(double lo, double hi, std::vector<double> breakpoints, Fn eval)
    : lo_(lo), hi_(hi), breakpoints_(std::move(breakpoints)), eval_(std::move(eval))
{
    if (!(lo_ <= hi_)) {
        throw ValidationError("curve domain must satisfy lo <= hi");
    }
    std::sort(breakpoints_.begin(), breakpoints_.end());
    breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
}

double PiecewiseCurve::left_limit(double z) const
{
    return eval_(z * (1.0 - 1e-12));
}

double PiecewiseCurve::right_limit(double z) const
{
    return eval_(z * (1.0 + 1e-12));
}

PiecewiseCurve PiecewiseCurve::scaled(double alpha) const
{
    auto inner = eval_;
    return PiecewiseCurve(lo_, hi_, breakpoints_, [inner, alpha](double z) { return alpha * inner(z); });
}

PiecewiseCurve PiecewiseCurve::map(std::function<double(double, double)> g) const
{
    auto inner = eval_;
    return PiecewiseCurve(lo_, hi_, breakpoints_,
                          [inner, g = std::move(g)](double z) { return g(z, inner(z)); });
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints, const QuadratureConfig& cfg)
{
    cfg.validate();
    if (!(a <= b)) {
        throw PreconditionError("integrate requires a <= b");
    }
    if (a == b) {
        return 0.0;
    }

    std::vector<double> cuts{a};
    for (double p : breakpoints) {
        if (p > a && p < b) {
            cuts.push_back(p);
        }
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Segment> heap;
    double value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Segment s = gauss_kronrod(f, cuts[i], cuts[i + 1], 0);
        value += s.value;
        error += s.error;
        heap.push(s);
    }

    int segments = static_cast<int>(heap.size());
    while (error > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value))) {
        const Segment worst = heap.top();
        if (worst.depth >= cfg.max_depth || segments >= kMaxSegments) {
            std::ostringstream msg;
            msg << "quadrature did not converge on [" << worst.lo << ", " << worst.hi
                << "] (error estimate " << error << ")";
            throw QuadratureError(msg.str(), worst.lo, worst.hi);
        }
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const Segment left = gauss_kronrod(f, worst.lo, mid, worst.depth + 1);
        const Segment right = gauss_kronrod(f, mid, worst.hi, worst.depth + 1);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++segments;

        // The running sums drift; refresh them from the heap now and then.
        if (segments % 256 == 0) {
            auto copy = heap;
            value = 0.0;
            error = 0.0;
            while (!copy.empty()) {
                value += copy.top().value;
                error += copy.top().error;
                copy.pop();
            }
        }
    }
    return value;
}

double integrate(const PiecewiseCurve& f, double a, double b, const QuadratureConfig& cfg)
{
    if (!(f.lo() <= a && a <= b && b <= f.hi())) {
        std::ostringstream msg;
        msg << "integration bounds [" << a << ", " << b << "] are outside the curve domain ["
            << f.lo() << ", " << f.hi() << "]";
        throw PreconditionError(msg.str());
    }
    return integrate([&f](double z) { return f(z); }, a, b, f.breakpoints(), cfg);
}

} // namespace predauction
