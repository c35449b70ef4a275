#include "doctest.h"

#include <cmath>

#include "switchsim/fitting.hpp"
#include "switchsim/models.hpp"
#include "switchsim/montecarlo.hpp"
#include "switchsim/preset.hpp"
#include "switchsim/propagation.hpp"
#include "switchsim/storage.hpp"

using namespace switchsim;

TEST_CASE("counter RNG streams are reproducible and distinct") {
    CounterRng a(42, 7), b(42, 7), c(42, 8);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform(), y = b.uniform(), z = c.uniform();
        all_equal &= (x == y);
        any_diff |= (x != z);
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("RNG samplers have the right first moments") {
    CounterRng rng(1234, 0);
    double psum = 0, esum = 0, bsum = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        psum += rng.poisson(2.5);
        esum += rng.exponential(4.0);
        bsum += rng.binomial(10, 0.3);
    }
    CHECK(psum / n == doctest::Approx(2.5).epsilon(0.01));
    CHECK(esum / n == doctest::Approx(0.25).epsilon(0.01));
    CHECK(bsum / n == doctest::Approx(3.0).epsilon(0.01));
}

TEST_CASE("bin transit: degenerate inputs") {
    const MediumParams m = MediumParams::from_depths(3.2, 0.91);
    MediumParams perfect;
    perfect.alpha = 3.2;
    perfect.alpha1 = 0.0;
    perfect.length = perfect.pulse_length = 1.0;
    CounterRng rng(9, 1);
    for (int i = 0; i < 200; ++i) {
        CHECK(mc::simulate_bin_transit(0, m, m.length, rng) == 0);
        CHECK(mc::simulate_bin_transit(1, perfect, perfect.length, rng) == 1);
    }
}

TEST_CASE("bin transit mean matches the exact bin mean") {
    const MediumParams m = MediumParams::from_depths(10.0, 1.2);
    const double mu0 = 1.0;
    const std::uint64_t n = 200000;
    CounterRng input(31, 0);
    double sum = 0, sum2 = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        CounterRng rng(32, i);
        const int out = mc::simulate_bin_transit(input.poisson(mu0), m, m.length, rng);
        sum += out;
        sum2 += double(out) * out;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    const double analytic = bin_mean_analytic(mu0, m, m.length, MeanForm::exact_series);
    CHECK(std::abs(mean - analytic) <= 3.0 * se);
}

TEST_CASE("zero storage efficiency gives extinction 1") {
    mc::Scenario sc = paper2014().scenario(StorageMode::rapid);
    sc.storage.eta_sb = 0.0;
    sc.herald.eta_wr = 0.0; // keep the herald model consistent
    const mc::CycleSummary s = mc::simulate_cycles(40000, sc, 99, 1);
    CHECK(s.agg.stored_excitations == 0);
    CHECK(std::abs(s.eps_total.value - 1.0) <= 3.0 * s.eps_total.stderr_sample);
}

TEST_CASE("cycles match the analytic composition, rapid storage mode") {
    const Preset& p = paper2014();
    const mc::Scenario sc = p.scenario(StorageMode::rapid);
    const mc::CycleSummary s = mc::simulate_cycles(200000, sc, 2024, 1);

    const double nb = stored_mean_before_switchoff(sc.n_g, sc.storage, StorageMode::rapid);
    const double ps = sc.storage.eta_sb * nb;
    const double n_out = transmitted_mean(sc.n_t, sc.target_bins, sc.target_t0);
    const double od_b = sc.od_b0 * (1.0 - sc.n_t / sc.n1);
    const double blocked = sc.n_t * std::exp(-od_b) + sc.n0;
    const double eps_model = 1.0 - ps * (1.0 - blocked / n_out);

    CHECK(std::abs(s.eps_total.value - eps_model) <= 3.0 * s.eps_total.stderr_sample);

    const double ph_model = sc.herald.eta_wr * sc.herald.eta_det * nb + sc.herald.p_h0;
    CHECK(std::abs(s.p_h - ph_model) <= 3.0 * s.p_h_se);

    // reference transmission: detected_ref / (eta_det ref_cycles) ~ N_out
    const double n_out_mc = double(s.agg.detected_ref) /
                            (sc.herald.eta_det * double(s.agg.ref_cycles));
    const double se_rel = 1.0 / std::sqrt(double(s.agg.detected_ref));
    CHECK(std::abs(n_out_mc - n_out) <= 3.0 * se_rel * n_out);
}

TEST_CASE("herald rate at N_g = 0 is the background rate") {
    mc::Scenario sc = paper2014().scenario(StorageMode::rapid);
    sc.n_g = 0.0;
    const mc::CycleSummary s = mc::simulate_cycles(400000, sc, 31337, 1);
    CHECK(std::abs(s.p_h - sc.herald.p_h0) <= 3.0 * s.p_h_se);
    CHECK(s.agg.stored_excitations == 0);
}

TEST_CASE("worker count does not change the result") {
    const mc::Scenario sc = paper2014().scenario(StorageMode::full);
    std::vector<mc::CycleRecord> r1, r4;
    const mc::CycleSummary s1 = mc::simulate_cycles(20001, sc, 5, 1, &r1);
    const mc::CycleSummary s4 = mc::simulate_cycles(20001, sc, 5, 4, &r4);

    REQUIRE(r1.size() == r4.size());
    for (std::size_t i = 0; i < r1.size(); ++i) {
        CHECK(r1[i].gate_in == r4[i].gate_in);
        CHECK(r1[i].stored == r4[i].stored);
        CHECK(r1[i].target_transmitted == r4[i].target_transmitted);
        CHECK(r1[i].target_detected == r4[i].target_detected);
        CHECK(r1[i].herald_detected == r4[i].herald_detected);
    }

    CHECK(s1.agg.detected_gate == s4.agg.detected_gate);
    CHECK(s1.agg.detected_ref == s4.agg.detected_ref);
    CHECK(s1.agg.stored_excitations == s4.agg.stored_excitations);
    CHECK(s1.agg.heralds == s4.agg.heralds);
    CHECK(s1.agg.gate_in == s4.agg.gate_in);
    CHECK(s1.eps_total.value == s4.eps_total.value);
    CHECK(s1.eps_post == s4.eps_post);
    REQUIRE(s1.agg.samples.size() == s4.agg.samples.size());
    for (std::size_t i = 0; i < s1.agg.samples.size(); ++i) {
        CHECK(s1.agg.samples[i].det_gate == s4.agg.samples[i].det_gate);
        CHECK(s1.agg.samples[i].det_ref == s4.agg.samples[i].det_ref);
    }
}

TEST_CASE("per-cycle records satisfy the count invariants") {
    const mc::Scenario sc = paper2014().scenario(StorageMode::full);
    std::vector<mc::CycleRecord> records;
    mc::simulate_cycles(5000, sc, 17, 2, &records);
    REQUIRE(records.size() == 5000);
    for (const auto& r : records) {
        CHECK(r.target_detected <= r.target_transmitted);
        CHECK(r.target_transmitted <= r.target_in + r.background_emitted);
        CHECK(r.stored <= r.gate_in);
        CHECK(r.background_emitted <= r.stored);
        if (r.cycle_index % 2 == 0) CHECK(r.gate_in == 0); // reference cycles
        CHECK(r.cycle_index == r.rng_stream_id);
    }
}

TEST_CASE("detection thinning commutes with aggregation") {
    const mc::Scenario sc = paper2014().scenario(StorageMode::rapid);
    const mc::CycleSummary s = mc::simulate_cycles(200000, sc, 612, 1);
    const double eta = sc.herald.eta_det;
    // detected/eta vs transmitted: same mean within 3 sigma
    const double det_scaled = double(s.agg.detected_gate) / eta;
    const double trans = double(s.agg.transmitted_gate);
    const double se = std::sqrt(trans + det_scaled / eta);
    CHECK(std::abs(det_scaled - trans) <= 3.0 * se);
}

TEST_CASE("postselected extinction is drastically lower than the total") {
    const mc::Scenario sc = paper2014().scenario(StorageMode::full);
    const mc::CycleSummary s = mc::simulate_cycles(1000000, sc, 20140607, 1);
    CHECK(s.eps_total.value > 0.8);
    CHECK(s.eps_post < 0.3);
    CHECK(s.eps_post_shot_se > 0.0);
    CHECK(s.eps_post_jack_se > 0.0);
}

TEST_CASE("g2 of uncorrelated Poissonian light is 1") {
    const auto clicks = mc::generate_poisson_clicks(30000, 3e6, 2e-6, 5150);
    const auto rows = mc::estimate_g2(clicks, 0.25e-6, 1.0e-6);
    REQUIRE(!rows.empty());
    int checked = 0;
    for (const auto& row : rows) {
        if (row.flagged) continue;
        CHECK(std::abs(row.g2 - 1.0) <= 3.0 * row.se);
        ++checked;
    }
    CHECK(checked >= 6);
}

TEST_CASE("g2 baseline holds when most cycles are empty") {
    // mostly-empty cycles: the shuffle normalization must count absent
    // cycles as empty partners, not skip to the next cycle with clicks
    const auto clicks = mc::generate_poisson_clicks(400000, 0.15e6, 2e-6, 2718);
    const auto rows = mc::estimate_g2(clicks, 0.5e-6, 1.0e-6);
    int checked = 0;
    for (const auto& row : rows) {
        if (row.flagged) continue;
        CHECK(std::abs(row.g2 - 1.0) <= 3.0 * row.se);
        ++checked;
    }
    CHECK(checked >= 3);
}

TEST_CASE("g2 flags low-statistics bins") {
    const auto clicks = mc::generate_poisson_clicks(40, 1e6, 1e-6, 99);
    const auto rows = mc::estimate_g2(clicks, 0.25e-6, 0.5e-6);
    bool any_flagged = false;
    for (const auto& row : rows) any_flagged |= row.flagged;
    CHECK(any_flagged);
}

TEST_CASE("single-excitation retrieval shows antibunching") {
    const auto clicks = mc::generate_retrieval_clicks(300000, 0.10, 0.005, 0.3e-6, 8080);
    // bins of one window width: both lag bins together hold g2(0) binned
    // over the complete pulse
    const auto rows = mc::estimate_g2(clicks, 0.3e-6, 0.3e-6);
    std::uint64_t coincidences = 0;
    bool found = false;
    for (const auto& row : rows)
        if (std::abs(row.tau) <= 0.3e-6) {
            found = true;
            CHECK(row.g2 < 0.5);
            coincidences += row.coincidences;
        }
    CHECK(found);
    CHECK(coincidences >= 10);
}

TEST_CASE("blockade-dip g2 recovers the injected correlation time") {
    const double tau_c = 0.23e-6;
    const auto clicks = mc::generate_blockade_clicks(150000, 1.2e6, 1.2e6, 4e-6, tau_c, 1912);
    const auto rows = mc::estimate_g2(clicks, 0.08e-6, 1.6e-6);

    DataSeries d;
    for (const auto& row : rows) {
        if (row.flagged) continue;
        d.x.push_back(row.tau);
        d.y.push_back(row.g2);
        d.sigma.push_back(row.se);
    }
    REQUIRE(d.x.size() >= 12);

    const ModelInfo& m = *find_model("g2_dip");
    FitProblem prob;
    prob.model = m.fn;
    prob.free_params = {"depth", "width"};
    prob.initial = {{"depth", 0.8}, {"width", 0.4e-6}};
    prob.bounds = {{"depth", {0.0, 1.2}}, {"width", {2e-8, 5e-6}}};
    const FitResult r = fit(prob, d);
    REQUIRE(r.converged);
    CHECK(std::abs(r.values.at("width") - tau_c) <= 3.0 * r.std_errors.at("width"));
    CHECK(r.values.at("depth") == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("scenario validation") {
    mc::Scenario sc = paper2014().scenario();
    sc.n1 = 0.0;
    CHECK_THROWS_AS(sc.validate(), std::domain_error);
    sc = paper2014().scenario();
    sc.storage.eta_sb = 0.001; // herald_prob_per_stored would exceed 1
    CHECK_THROWS_AS(sc.validate(), std::domain_error);
    sc = paper2014().scenario();
    CHECK_THROWS_AS(mc::simulate_cycles(1, sc, 1, 1), std::domain_error);
}
