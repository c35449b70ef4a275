#include "doctest.h"

#include <cmath>

#include "switchsim/expint.hpp"

#include "oracles.hpp"

using switchsim::expint_e1;

TEST_CASE("E1 matches the quadrature oracle of the defining integral") {
    // expected values frozen from oracles::e1_quadrature
    CHECK(expint_e1(1.0) == doctest::Approx(0.21938393439552).epsilon(1e-10));
    CHECK(expint_e1(10.0) == doctest::Approx(4.15696892968532e-6).epsilon(1e-10));

    for (const double x : {0.05, 0.1, 0.3, 0.5, 0.9, 1.0, 1.5, 2.0, 4.0, 7.0, 10.0, 20.0}) {
        const double oracle = oracles::e1_quadrature(x);
        CHECK(expint_e1(x) == doctest::Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("E1 printed reference values") {
    CHECK(std::abs(expint_e1(1.0) - 0.2193839344) < 1e-9);
    CHECK(std::abs(expint_e1(10.0) - 4.15697e-6) < 5e-12);
}

TEST_CASE("E1 small-argument series limit") {
    constexpr double euler_gamma = 0.57721566490153286061;
    const double x = 1e-6;
    CHECK(std::abs(expint_e1(x) - (-euler_gamma - std::log(x))) <= 1e-6);
}

TEST_CASE("E1 is positive and strictly decreasing") {
    double prev = expint_e1(1e-6);
    for (double x = 0.01; x < 30.0; x *= 1.7) {
        const double cur = expint_e1(x);
        CHECK(cur > 0.0);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("E1 rejects non-positive arguments") {
    CHECK_THROWS_AS(expint_e1(0.0), std::domain_error);
    CHECK_THROWS_AS(expint_e1(-1.0), std::domain_error);
}
