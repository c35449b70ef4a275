#pragma once

// Test-only numerical oracles, independent of the implementation paths they
// check.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracles {

inline double simpson(const std::function<double(double)>& f, double a, double b) {
    const double m = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 48) {
    const double m = 0.5 * (a + b);
    const double whole = simpson(f, a, b);
    const double left = simpson(f, a, m);
    const double right = simpson(f, m, b);
    // the floor stops recursion once the refinement is down at rounding noise
    const double limit = 15.0 * std::max(tol, 1e-16 * (std::abs(left) + std::abs(right)));
    if (depth <= 0) throw std::runtime_error("adaptive_simpson: depth exhausted");
    if (std::abs(left + right - whole) < limit)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, 0.5 * tol, depth - 1);
}

// E1(x) by adaptive quadrature of the defining integral, written as
// e^{-x} int_0^inf e^{-u}/(x+u) du to keep the integrand scale at O(1/x).
// Cut at u = 60; the dropped tail is below e^{-60} of the remaining scale.
inline double e1_quadrature(double x) {
    if (!(x > 0)) throw std::domain_error("e1_quadrature: x must be > 0");
    auto g = [x](double u) { return std::exp(-u) / (x + u); };
    const double coarse = std::abs(simpson(g, 0.0, 2.0)) + std::abs(simpson(g, 2.0, 60.0));
    return std::exp(-x) * adaptive_simpson(g, 0.0, 60.0, 1e-13 * coarse);
}

// Bin-resolved Riemann-midpoint sum replacing the storage integral:
// N_b = (b / n_sub) sum_i N_bin(z_i) with z_i the midpoints of n_sub slices
// of the pulse. mean_fn(z_over_lp) must return the bin mean at depth z.
inline double subbin_sum(const std::function<double(double)>& mean_fn, double bins, int n_sub) {
    double sum = 0.0;
    for (int i = 0; i < n_sub; ++i) sum += mean_fn((i + 0.5) / n_sub);
    return bins * sum / n_sub;
}

} // namespace oracles
