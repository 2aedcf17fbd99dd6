// Adaptive Gauss-Kronrod (7-15) quadrature on finite intervals.
//
// Globally adaptive: the interval with the largest error estimate is bisected
// until the summed error satisfies max(abs_tol, rel_tol * |integral|).
// Non-convergence is an error, never a silently inaccurate value.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace uplinksim {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::size_t max_intervals = 4000;
    // Optional initial subdivision points. Points outside (a,b) are ignored.
    // Callers should seed these with the integrand's known feature locations
    // (e.g. Gaussian centers) so that narrow structure inside a wide interval
    // is never stepped over by the initial rule.
    std::vector<double> breakpoints{};
};

namespace detail {

// QUADPACK dqk15 nodes and weights on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct IntervalEstimate {
    double a = 0, b = 0;
    double value = 0;
    double error = 0;
};

template <class F>
IntervalEstimate gauss_kronrod_15(const F& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    const double fc = f(mid);
    double kronrod = kKronrodWeights[7] * fc;
    double gauss = kGaussWeights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        kronrod += kKronrodWeights[i] * fsum;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
    }
    IntervalEstimate est;
    est.a = a;
    est.b = b;
    est.value = kronrod * half;
    est.error = std::abs((kronrod - gauss) * half);
    return est;
}

}  // namespace detail

// Integrates f over [a, b]. Throws QuadratureError if the requested tolerance
// cannot be met within options.max_intervals subdivisions.
template <class F>
double integrate(const F& f, double a, double b,
                 const QuadratureOptions& options = {}) {
    if (!(std::isfinite(a) && std::isfinite(b)))
        throw QuadratureError("quadrature: non-finite integration bounds");
    if (a == b) return 0.0;
    const double sign = (b > a) ? 1.0 : -1.0;
    if (b < a) std::swap(a, b);

    std::vector<double> cuts;
    cuts.push_back(a);
    for (double x : options.breakpoints)
        if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<detail::IntervalEstimate> intervals;
    intervals.reserve(cuts.size() + 16);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        intervals.push_back(detail::gauss_kronrod_15(f, cuts[i], cuts[i + 1]));

    for (;;) {
        double total = 0, error = 0;
        for (const auto& iv : intervals) {
            total += iv.value;
            error += iv.error;
        }
        const double target =
            std::max(options.abs_tol, options.rel_tol * std::abs(total));
        if (error <= target) return sign * total;
        if (intervals.size() >= options.max_intervals)
            throw QuadratureError(
                "quadrature: failed to converge to the requested tolerance "
                "(error " + std::to_string(error) + " after " +
                std::to_string(intervals.size()) + " intervals)");

        auto worst = std::max_element(
            intervals.begin(), intervals.end(),
            [](const auto& x, const auto& y) { return x.error < y.error; });
        const double lo = worst->a, hi = worst->b;
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            throw QuadratureError(
                "quadrature: interval cannot be subdivided further at the "
                "requested tolerance");
        *worst = detail::gauss_kronrod_15(f, lo, mid);
        intervals.push_back(detail::gauss_kronrod_15(f, mid, hi));
    }
}

}  // namespace uplinksim
