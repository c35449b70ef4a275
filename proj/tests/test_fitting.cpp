#include "doctest.h"

#include <cmath>

#include "switchsim/constants.hpp"
#include "switchsim/fitting.hpp"
#include "switchsim/models.hpp"
#include "switchsim/preset.hpp"
#include "switchsim/rng.hpp"

using namespace switchsim;

namespace {

DataSeries noisy_model(const ModelInfo& model, const ParamMap& params,
                       const std::vector<double>& xs, double rel, double abs,
                       std::uint64_t seed) {
    CounterRng rng(seed, 7);
    DataSeries d;
    for (double x : xs) {
        const double y = model.fn(x, params);
        const double sigma = std::abs(y) * rel + abs;
        d.x.push_back(x);
        d.y.push_back(y + sigma * rng.normal());
        d.sigma.push_back(sigma);
    }
    return d;
}

} // namespace

TEST_CASE("linear fit on an exact line") {
    DataSeries d;
    for (double x = 0.0; x <= 5.0; x += 1.0) {
        d.x.push_back(x);
        d.y.push_back(2.0 * x + 1.0);
    }
    const FitResult r = fit_linear(d);
    CHECK(r.values.at("slope") == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(r.values.at("intercept") == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.residual_norm < 1e-10);
    CHECK(r.converged);
}

TEST_CASE("linear fit: zero slope and degenerate input") {
    DataSeries d;
    for (double x = 0.0; x <= 4.0; x += 1.0) {
        d.x.push_back(x);
        d.y.push_back(3.5);
    }
    const FitResult r = fit_linear(d);
    CHECK(r.values.at("slope") == doctest::Approx(0.0));
    CHECK(r.values.at("intercept") == doctest::Approx(3.5));

    DataSeries one;
    one.x = {1.0};
    one.y = {2.0};
    CHECK_THROWS_AS(fit_linear(one), FitError);

    DataSeries same_x;
    same_x.x = {1.0, 1.0, 1.0};
    same_x.y = {1.0, 2.0, 3.0};
    CHECK_THROWS_WITH_AS(fit_linear(same_x), doctest::Contains("intercept, slope"), FitError);
}

TEST_CASE("noiseless depletion line recovers N1 = 23") {
    DataSeries d;
    for (double nt = 0.0; nt <= 7.01; nt += 1.0) {
        d.x.push_back(nt);
        d.y.push_back(1.0 - nt / 23.0);
    }
    const FitResult r = fit_linear(d);
    CHECK(-1.0 / r.values.at("slope") == doctest::Approx(23.0).epsilon(1e-9));
}

TEST_CASE("noiseless dephasing line recovers the 0.8/us intercept") {
    DataSeries d;
    for (int i = 0; i < 8; ++i) {
        d.x.push_back(2e18 * i);
        d.y.push_back(0.8e6 + 1.5e-13 * 2e18 * i);
    }
    const FitResult r = fit_linear(d);
    CHECK(r.values.at("intercept") == doctest::Approx(0.8e6).epsilon(1e-9));
    CHECK(r.values.at("slope") == doctest::Approx(1.5e-13).epsilon(1e-9));
}

TEST_CASE("sigma rescaling leaves best-fit values, scales errors") {
    const ModelInfo& m = *find_model("transmitted_mean");
    DataSeries d = noisy_model(m, m.defaults(), {0.3, 0.8, 1.5, 2.4, 3.5, 5.0, 7.0}, 0.05, 0.0,
                               11);
    FitProblem prob;
    prob.model = m.fn;
    prob.free_params = {"t0", "b"};
    prob.initial = {{"t0", 0.5}, {"b", 1.0}};
    const FitResult r1 = fit(prob, d);

    DataSeries scaled = d;
    for (double& s : scaled.sigma) s *= 3.0;
    const FitResult r3 = fit(prob, scaled);

    CHECK(r1.converged);
    CHECK(r3.converged);
    CHECK(r3.values.at("t0") == doctest::Approx(r1.values.at("t0")).epsilon(1e-10));
    CHECK(r3.values.at("b") == doctest::Approx(r1.values.at("b")).epsilon(1e-10));
    CHECK(r3.std_errors.at("t0") == doctest::Approx(3.0 * r1.std_errors.at("t0")).epsilon(1e-6));
    CHECK(r3.std_errors.at("b") == doctest::Approx(3.0 * r1.std_errors.at("b")).epsilon(1e-6));
}

TEST_CASE("transmitted_mean round trip") {
    const ModelInfo& m = *find_model("transmitted_mean");
    const std::vector<double> xs = {0.1, 0.7, 1.3, 1.9, 2.5, 3.1, 3.8, 4.4, 5.0, 5.7, 6.3, 7.0};
    const DataSeries d = noisy_model(m, {{"t0", 0.30}, {"b", 1.6}}, xs, 0.05, 0.0, 3);
    FitProblem prob;
    prob.model = m.fn;
    prob.free_params = {"t0", "b"};
    prob.initial = {{"t0", 0.5}, {"b", 1.0}};
    prob.bounds = {{"t0", {0.01, 1.0}}, {"b", {0.1, 20.0}}};
    const FitResult r = fit(prob, d);
    REQUIRE(r.converged);
    CHECK(std::abs(r.values.at("t0") - 0.30) <= 3.0 * r.std_errors.at("t0"));
    CHECK(std::abs(r.values.at("b") - 1.6) <= 3.0 * r.std_errors.at("b"));
}

TEST_CASE("storage extinction round trip with fixed depths") {
    const ModelInfo& m = *find_model("extinction_vs_ng_full");
    const std::vector<double> xs = {0.0, 0.17, 0.35, 0.7, 1.0, 1.4, 2.0, 2.8, 4.0};
    const DataSeries d = noisy_model(m, m.defaults(), xs, 0.0, 0.01, 5);
    FitProblem prob;
    prob.model = m.fn;
    prob.free_params = {"b", "eta_sb"};
    prob.fixed = {{"od", 3.2}, {"od_eit", 0.91}};
    prob.initial = {{"b", 1.5}, {"eta_sb", 0.2}};
    prob.bounds = {{"b", {0.2, 10.0}}, {"eta_sb", {0.0, 1.0}}};
    const FitResult r = fit(prob, d);
    REQUIRE(r.converged);
    CHECK(std::abs(r.values.at("b") - 2.0) <= 3.0 * r.std_errors.at("b"));
    CHECK(std::abs(r.values.at("eta_sb") - 0.29) <= 3.0 * r.std_errors.at("eta_sb"));
    CHECK(r.values.at("od") == 3.2); // fixed parameters pass through
}

TEST_CASE("EIT spectrum round trip recovers od, t0, delta_t") {
    const ModelInfo& m = *find_model("eit_transmission");
    const double mhz = kTwoPi * 1e6;
    std::vector<double> xs;
    for (int i = 0; i < 60; ++i) xs.push_back((-20.0 + 40.0 * i / 59.0) * mhz);
    const ParamMap truth = m.defaults();
    const DataSeries d = noisy_model(m, truth, xs, 0.0, 0.01, 9);

    FitProblem prob;
    prob.model = m.fn;
    prob.free_params = {"od", "t0", "delta_t"};
    prob.fixed = {{"gamma", truth.at("gamma")}, {"delta0", 0.0}, {"delta1", 0.0}};
    prob.initial = {{"od", 2.0}, {"t0", 0.3}, {"delta_t", 2.5 * mhz}};
    prob.bounds = {{"od", {0.1, 15.0}}, {"t0", {0.01, 1.0}}, {"delta_t", {0.1 * mhz, 10.0 * mhz}}};
    const FitResult r = fit(prob, d);
    REQUIRE(r.converged);
    CHECK(std::abs(r.values.at("od") - truth.at("od")) <= 3.0 * r.std_errors.at("od"));
    CHECK(std::abs(r.values.at("t0") - truth.at("t0")) <= 3.0 * r.std_errors.at("t0"));
    CHECK(std::abs(r.values.at("delta_t") - truth.at("delta_t")) <=
          3.0 * r.std_errors.at("delta_t"));
}

TEST_CASE("exponential fits") {
    // exact decay: tau = 60 us
    DataSeries d;
    for (int i = 0; i < 12; ++i) {
        const double t = 10e-6 + 140e-6 * i / 11.0;
        d.x.push_back(t);
        d.y.push_back(1.0 - 0.2 * std::exp(-t / 60e-6));
    }
    const FitResult r = fit_exponential(d, ExpModel::extinction_recovery);
    REQUIRE(r.converged);
    CHECK(r.values.at("tau_pop") == doctest::Approx(60e-6).epsilon(1e-6));
    CHECK(r.values.at("eps0") == doctest::Approx(0.8).epsilon(1e-6));

    // noisy retrieval decay, rate 1.1 / us
    CounterRng rng(77, 0);
    DataSeries ret;
    for (int i = 0; i < 14; ++i) {
        const double t = 0.1e-6 + 2.2e-6 * i / 13.0;
        const double y = std::exp(-1.1e6 * t);
        ret.x.push_back(t);
        ret.y.push_back(y * (1.0 + 0.10 * rng.normal()));
        ret.sigma.push_back(0.10 * y);
    }
    const FitResult rr = fit_exponential(ret, ExpModel::amplitude_decay);
    REQUIRE(rr.converged);
    CHECK(std::abs(rr.values.at("rate") - 1.1e6) <= 3.0 * rr.std_errors.at("rate"));
}

TEST_CASE("rank deficiency is reported with the parameter combination") {
    FitProblem prob;
    prob.model = [](double x, const ParamMap& p) { return (p.at("a") + p.at("b")) * x; };
    prob.free_params = {"a", "b"};
    prob.initial = {{"a", 1.0}, {"b", 1.0}};
    DataSeries d;
    for (double x = 0.0; x <= 4.0; x += 1.0) {
        d.x.push_back(x);
        d.y.push_back(3.0 * x + (x == 2.0 ? 0.01 : 0.0));
    }
    CHECK_THROWS_WITH_AS(fit(prob, d), doctest::Contains("a, b"), FitError);
}

TEST_CASE("non-convergence is reported, not thrown") {
    const ModelInfo& m = *find_model("transmitted_mean");
    const DataSeries d = noisy_model(m, m.defaults(), {0.5, 1.5, 3.0, 5.0, 7.0}, 0.05, 0.0, 13);
    FitProblem prob;
    prob.model = m.fn;
    prob.free_params = {"t0", "b"};
    prob.initial = {{"t0", 0.9}, {"b", 9.0}};
    prob.max_iterations = 1;
    const FitResult r = fit(prob, d);
    CHECK_FALSE(r.converged);
    CHECK(r.message == "maximum iterations reached");
}

TEST_CASE("problem validation") {
    const ModelInfo& m = *find_model("transmitted_mean");
    DataSeries d;
    d.x = {1.0, 2.0, 3.0};
    d.y = {0.2, 0.4, 0.5};
    FitProblem prob;
    prob.model = m.fn;
    prob.free_params = {"t0", "b"};
    prob.fixed = {{"t0", 0.3}};
    prob.initial = {{"t0", 0.3}, {"b", 1.0}};
    CHECK_THROWS_WITH_AS(fit(prob, d), doctest::Contains("both free and fixed"), FitError);

    prob.fixed.clear();
    prob.initial.erase("b");
    CHECK_THROWS_WITH_AS(fit(prob, d), doctest::Contains("missing initial"), FitError);

    prob.initial["b"] = 1.0;
    DataSeries two;
    two.x = {1.0, 2.0};
    two.y = {0.2, 0.4};
    CHECK_THROWS_AS(fit(prob, two), FitError); // fewer points than free params + 1
}

TEST_CASE("deterministic: identical inputs give identical results") {
    const ModelInfo& m = *find_model("herald_probability");
    const std::vector<double> xs = {0.1, 0.3, 0.7, 1.2, 2.0, 3.0, 4.0};
    const DataSeries d = noisy_model(m, m.defaults(), xs, 0.05, 0.0, 21);
    FitProblem prob;
    prob.model = m.fn;
    prob.free_params = {"b", "eta_wr"};
    prob.fixed = {{"eta_det", 0.27}, {"od_eit", 0.91}, {"p_h0", 1.4e-4}};
    prob.initial = {{"b", 1.5}, {"eta_wr", 0.01}};
    const FitResult a = fit(prob, d);
    const FitResult b = fit(prob, d);
    CHECK(a.values.at("b") == b.values.at("b"));
    CHECK(a.values.at("eta_wr") == b.values.at("eta_wr"));
    CHECK(a.iterations == b.iterations);
}
