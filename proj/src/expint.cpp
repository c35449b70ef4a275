#include "switchsim/expint.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace switchsim {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

// E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!), for small x.
double e1_series(double x) {
    double sum = 0.0;
    double term = 1.0; // x^k / k! carried incrementally
    for (int k = 1; k <= 60; ++k) {
        term *= x / k;
        const double contrib = term / k;
        sum += (k % 2 == 1) ? contrib : -contrib;
        if (contrib < 1e-17 * (std::abs(sum) + 1.0)) break;
    }
    return -kEulerGamma - std::log(x) + sum;
}

// Continued fraction E1(x) = e^{-x} / (x + 1 - 1^2/(x + 3 - 2^2/(x + 5 - ...)))
// evaluated with the modified Lentz algorithm.
double e1_contfrac(double x) {
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k <= 200; ++k) {
        const double a = -static_cast<double>(k) * k;
        b += 2.0;
        d = a * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + a / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(-x) * h;
}

} // namespace

double expint_e1(double x) {
    if (!(x > 0.0))
        throw std::domain_error("expint_e1: argument must be > 0");
    if (x >= 700.0) return 0.0; // exp(-700) underflows below 1e-304
    return (x < 1.0) ? e1_series(x) : e1_contfrac(x);
}

} // namespace switchsim
