#include "doctest.h"

#include <cmath>

#include "switchsim/constants.hpp"
#include "switchsim/eit.hpp"
#include "switchsim/preset.hpp"

using namespace switchsim;

namespace {
const double kMHz = kTwoPi * 1e6;

eit::SpectrumParams gate_params() { return paper2014().eit_gate_spectrum(); }
}

TEST_CASE("transmission goes to 1 far from resonance") {
    const auto p = gate_params();
    CHECK(eit::transmission(2000.0 * kMHz, p) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(eit::transmission(-2000.0 * kMHz, p) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("on-resonance closed form and peak height") {
    const auto p = gate_params();
    CHECK(eit::transmission(0.0, p) ==
          doctest::Approx(std::exp(-p.od) + p.t0).epsilon(1e-12));
    // od = 3.2 and t0 = e^{-0.91}: peak 0.40 + e^{-3.2} = 0.44
    CHECK(eit::transmission(0.0, p) == doctest::Approx(0.44).epsilon(0.01));
    CHECK(eit::transmission(0.0, p) == doctest::Approx(0.443286).epsilon(1e-4));
}

TEST_CASE("spectrum is symmetric about the common center") {
    auto p = gate_params();
    p.delta0 = p.delta1 = 0.7 * kMHz;
    for (double d = 0.3; d < 20.0; d *= 2.1)
        CHECK(eit::transmission(p.delta0 + d * kMHz, p) ==
              doctest::Approx(eit::transmission(p.delta0 - d * kMHz, p)).epsilon(1e-12));
}

TEST_CASE("transparency width") {
    const auto& c = paper2014().config;
    const double gate = eit::transparency_width(4.7 * kMHz, c.gamma, 3.5);
    const double target = eit::transparency_width(9.4 * kMHz, c.gamma, 10.0);
    CHECK(gate == doctest::Approx(1.7 * kMHz).epsilon(0.10));
    CHECK(target == doctest::Approx(4.0 * kMHz).epsilon(0.10));
    CHECK(eit::transparency_width(9.4 * kMHz, c.gamma, 3.5) ==
          doctest::Approx(4.0 * gate).epsilon(1e-12));
    CHECK_THROWS_AS(eit::transparency_width(4.7 * kMHz, c.gamma, 0.0), std::domain_error);
}

TEST_CASE("resonant OD with dephasing") {
    const auto& c = paper2014().config;
    const double om = 4.7 * kMHz;
    CHECK(eit::resonant_od_with_dephasing(3.5, om, c.gamma, 0.0) == 0.0);
    // monotone: increasing in gamma21, decreasing in rabi
    double prev = 0.0;
    for (double g21 = 0.2e6; g21 < 4e6; g21 *= 1.7) {
        const double cur = eit::resonant_od_with_dephasing(3.5, om, c.gamma, g21);
        CHECK(cur > prev);
        prev = cur;
    }
    CHECK(eit::resonant_od_with_dephasing(3.5, 2.0 * om, c.gamma, 1.1e6) <
          eit::resonant_od_with_dephasing(3.5, om, c.gamma, 1.1e6));
    // value at the operating point, recorded for the report; this convention
    // gives a smaller number than the quoted 0.8 (see README)
    const double pred = eit::resonant_od_with_dephasing(3.5, om, c.gamma, 1.1e6);
    CHECK(pred == doctest::Approx(0.29235).epsilon(1e-3));
}

TEST_CASE("group velocity estimators") {
    const auto& c = paper2014().config;
    const double vg = eit::group_velocity(9.4 * kMHz, 5e-6, c.gamma);
    CHECK(vg == doctest::Approx(500.0).epsilon(0.10));
    CHECK(eit::group_velocity(9.4 * kMHz, 10e-6, c.gamma) ==
          doctest::Approx(2.0 * vg).epsilon(1e-12));

    const double vg_delay = eit::group_velocity_from_delay(28e-6, 0.25e-6);
    CHECK(vg_delay == doctest::Approx(300.0).epsilon(0.10));
}

TEST_CASE("correlation time prediction") {
    const auto& c = paper2014().config;
    const double tau = eit::correlation_time_prediction(10.0, c.gamma, 9.4 * kMHz);
    CHECK(tau == doctest::Approx(9.7267e-8).epsilon(1e-4)); // frozen arithmetic
    CHECK(eit::correlation_time_prediction(10.0, c.gamma, 2.0 * 9.4 * kMHz) ==
          doctest::Approx(tau / 4.0).epsilon(1e-12));

    // at the on-axis optical depth sqrt(2 pi) sigma_z / l_a the prediction
    // reproduces the quoted 0.12 us
    const double od_axis = std::sqrt(kTwoPi) * 28e-6 / 5e-6;
    const double tau_axis = eit::correlation_time_prediction(od_axis, c.gamma, 9.4 * kMHz);
    CHECK(tau_axis == doctest::Approx(0.12e-6).epsilon(0.10));
}

TEST_CASE("the two-term model is reported raw, without clamping") {
    // a displaced transparency peak on a shallow absorption line pushes the
    // sum above 1; the model value is returned as-is
    eit::SpectrumParams p;
    p.od = 0.5;
    p.gamma = 5.75 * kMHz;
    p.delta0 = 0.0;
    p.delta1 = 17.0 * kMHz;
    p.t0 = 0.9;
    p.delta_t = 2.0 * kMHz;
    p.validate();
    CHECK(eit::transmission(p.delta1, p) > 1.0);
}

TEST_CASE("spectrum parameter validation") {
    auto p = gate_params();
    p.delta_t = 0.0;
    CHECK_THROWS_AS(p.validate(), std::domain_error);
    p = gate_params();
    p.t0 = 1.2;
    CHECK_THROWS_AS(p.validate(), std::domain_error);
}
