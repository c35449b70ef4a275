#include "switchsim/acceptance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "switchsim/constants.hpp"
#include "switchsim/eit.hpp"
#include "switchsim/expint.hpp"
#include "switchsim/fitting.hpp"
#include "switchsim/models.hpp"
#include "switchsim/montecarlo.hpp"
#include "switchsim/params.hpp"
#include "switchsim/preset.hpp"
#include "switchsim/propagation.hpp"
#include "switchsim/storage.hpp"

namespace switchsim {

namespace {

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

class Suite {
public:
    explicit Suite(std::ostream* log) : log_(log) {}

    AcceptanceReport take() { return std::move(report_); }

    void check(int criterion, const std::string& name, bool pass, const std::string& detail) {
        report_.checks.push_back({criterion, name, pass, detail});
    }

    // |value - reference| / |reference| <= tol
    void check_rel(int criterion, const std::string& name, double value, double reference,
                   double tol) {
        const double dev = (value - reference) / reference;
        check(criterion, name, std::abs(dev) <= tol,
              fmt("%.6g vs %.6g (%+.2f%%, tol %.0f%%)", value, reference, dev * 100.0,
                  tol * 100.0));
    }

    void check_abs(int criterion, const std::string& name, double value, double reference,
                   double tol) {
        const double dev = value - reference;
        check(criterion, name, std::abs(dev) <= tol,
              fmt("%.6g vs %.6g (dev %.2e, tol %.1e)", value, reference, dev, tol));
    }

    // |value - reference| <= n_sigma * sigma
    void check_sigma(int criterion, const std::string& name, double value, double reference,
                     double sigma, double n_sigma = 3.0) {
        const double dev = value - reference;
        const bool ok = sigma > 0 && std::abs(dev) <= n_sigma * sigma;
        check(criterion, name, ok,
              fmt("%.6g vs %.6g (dev %.3g = %.2f sigma)", value, reference, dev,
                  sigma > 0 ? std::abs(dev) / sigma : INFINITY));
    }

    void progress(const std::string& line) {
        if (log_) (*log_) << line << "\n" << std::flush;
    }

private:
    AcceptanceReport report_;
    std::ostream* log_;
};

// ---------------------------------------------------------------- 1 ----

void criterion1_derived(Suite& s) {
    const Preset& p = paper2014();
    const auto& c = p.config;
    const auto& r = p.reference;
    const DerivedQuantities d = derive_all(c);
    const double kB = constants().kB;

    s.check_rel(1, "sigma_x", d.cloud.sigma_x, r.at("sigma_x"), 0.05);
    s.check_rel(1, "sigma_y", d.cloud.sigma_y, r.at("sigma_y"), 0.05);
    s.check_rel(1, "sigma_z", d.cloud.sigma_z, r.at("sigma_z"), 0.05);
    s.check_rel(1, "peak_density", d.cloud.peak_density, r.at("peak_density"), 0.05);
    s.check_rel(1, "e_field_gate", d.e_field_gate, r.at("e_field_gate"), 0.05);
    s.check_rel(1, "e_field_target", d.e_field_target, r.at("e_field_target"), 0.05);
    s.check_rel(1, "rabi_gate", d.rabi_gate, r.at("rabi_gate"), 0.05);
    s.check_rel(1, "rabi_target", d.rabi_target, r.at("rabi_target"), 0.05);
    s.check_rel(1, "blockade_radius_gate", d.blockade_radius_gate,
                r.at("blockade_radius_gate"), 0.05);
    s.check_rel(1, "blockade_radius_target", d.blockade_radius_target,
                r.at("blockade_radius_target"), 0.05);
    s.check_rel(1, "absorption_length", d.absorption_length, r.at("absorption_length"), 0.10);
    s.check_rel(1, "transparency_width_gate", d.transparency_width_gate,
                r.at("transparency_width_gate"), 0.10);
    s.check_rel(1, "transparency_width_target", d.transparency_width_target,
                r.at("transparency_width_target"), 0.10);

    // the published group-velocity and correlation-time numbers are built
    // from the published rounded inputs; evaluate the estimators exactly
    // there (the full-precision chain is reported by cmd_derive instead)
    const double vg = eit::group_velocity(r.at("rabi_target"), r.at("absorption_length"),
                                          c.gamma);
    s.check_rel(1, "group_velocity_formula", vg, r.at("group_velocity_formula"), 0.10);
    s.check_rel(1, "group_velocity_delay", d.group_velocity_delay,
                r.at("group_velocity_delay"), 0.10);
    const double od_axis =
        std::sqrt(kTwoPi) * r.at("sigma_z") / r.at("absorption_length");
    const double tau_c = eit::correlation_time_prediction(od_axis, c.gamma, r.at("rabi_target"));
    s.check_rel(1, "correlation_time_pred", tau_c, r.at("correlation_time_pred"), 0.10);

    s.check_rel(1, "dipole_potential", d.dipole_potential / kB * 1e6,
                r.at("dipole_potential_uK"), 0.05);
    s.check_rel(1, "dipole_potential_avg", d.dipole_potential_avg / kB * 1e6,
                r.at("dipole_potential_avg_uK"), 0.05);
    s.progress("criterion 1 done");
}

// ---------------------------------------------------------------- 2 ----

void criterion2_ode(Suite& s) {
    const double ods[] = {1.0, 3.2, 10.0};
    const double od_eits[] = {0.3, 0.91, 1.2};
    const double mu0s[] = {0.1, 0.5, 1.0, 2.0, 4.0};
    const double zs[] = {0.25, 0.5, 1.0};
    double worst = 0;
    std::string worst_at = "-";
    int points = 0;
    for (double od : ods)
        for (double od_eit : od_eits) {
            if (od_eit >= od) continue; // outside the alpha > alpha1 domain
            const MediumParams m = MediumParams::from_depths(od, od_eit);
            for (double mu0 : mu0s) {
                const BinDistribution init = BinDistribution::poisson(mu0);
                for (double zfrac : zs) {
                    const double z = zfrac * m.length;
                    const double analytic = bin_mean_analytic(mu0, m, z, MeanForm::exact_series);
                    const double ode = evolve_bin(init, m, z).mean();
                    const double rel = std::abs(analytic - ode) / std::abs(analytic);
                    ++points;
                    if (rel > worst) {
                        worst = rel;
                        worst_at = fmt("od=%g od_eit=%g mu0=%g z/L=%g", od, od_eit, mu0, zfrac);
                    }
                }
            }
        }
    s.check(2, "bin_mean_analytic vs evolve_bin grid", worst <= 1e-4,
            fmt("%d grid points, worst rel dev %.2e at %s (tol 1e-4)", points, worst,
                worst_at.c_str()));
    s.progress("criterion 2 done");
}

// ---------------------------------------------------------------- 3 ----

void criterion3_montecarlo(Suite& s) {
    // bin-transit death process vs the exact-series bin mean
    struct GridPoint {
        double od, od_eit, mu0;
    } grid[] = {{3.2, 0.91, 0.5}, {3.2, 0.91, 2.0}, {10.0, 1.2, 1.0}, {1.0, 0.3, 1.0},
                {10.0, 0.3, 4.0}};
    int gi = 0;
    for (const auto& g : grid) {
        const MediumParams m = MediumParams::from_depths(g.od, g.od_eit);
        const std::uint64_t n = 1000000;
        CounterRng source(20140604, 700 + gi);
        double sum = 0, sum2 = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            CounterRng rng(977001, i * 5 + gi);
            const int n0 = source.poisson(g.mu0);
            const int out = mc::simulate_bin_transit(n0, m, m.length, rng);
            sum += out;
            sum2 += static_cast<double>(out) * out;
        }
        const double mean = sum / n;
        const double var = sum2 / n - mean * mean;
        const double se = std::sqrt(var / n);
        const double analytic = bin_mean_analytic(g.mu0, m, m.length, MeanForm::exact_series);
        s.check_sigma(3, fmt("bin_transit mean od=%g od_eit=%g mu0=%g", g.od, g.od_eit, g.mu0),
                      mean, analytic, se);
        ++gi;
    }
    s.progress("criterion 3: bin transits done");

    // full gate-target cycles against the composed analytic model at 1e5
    const Preset& p = paper2014();
    const mc::Scenario sc = p.scenario(StorageMode::full);
    const mc::CycleSummary sum = mc::simulate_cycles(100000, sc, 20140604, 1);

    const StorageParams stor = p.storage_full();
    const double nb = stored_mean_before_switchoff(sc.n_g, stor, StorageMode::full);
    const double ps_model = stor.eta_sb * nb;
    const double n_out = transmitted_mean(sc.n_t, sc.target_bins, sc.target_t0);
    const double od_b = sc.od_b0 * (1.0 - sc.n_t / sc.n1);
    const double blocked = sc.n_t * std::exp(-od_b) + sc.n0;
    const double eps_model = ((1.0 - ps_model) * n_out + ps_model * blocked) / n_out;
    s.check_sigma(3, "simulate_cycles eps vs analytic composition (1e5)", sum.eps_global,
                  eps_model, sum.eps_total.stderr_shot);

    const double ph_model = p.herald().eta_wr * p.herald().eta_det * nb + p.herald().p_h0;
    s.check_sigma(3, "simulate_cycles p_h vs analytic composition (1e5)", sum.p_h, ph_model,
                  sum.p_h_se);

    // 1e6 cycles, rapid storage: the composition is closed-form without the
    // O(eta_sb^2) linearization, so the comparison is bias-free and the
    // 1/sqrt(n) convergence can be held to 3 sigma
    {
        const mc::Scenario rc = p.scenario(StorageMode::rapid);
        const mc::CycleSummary rsum = mc::simulate_cycles(1000000, rc, 20140608, 1);

        const double mu0 = rc.n_g / rc.storage.bins;
        const double q = (1.0 - std::exp(-mu0)) * (1.0 - std::exp(-rc.storage.od_eit)) /
                         rc.storage.od_eit;
        const int b_floor = static_cast<int>(std::floor(rc.storage.bins));
        const double b_frac = rc.storage.bins - b_floor;
        auto no_event = [&](double per_bin) {
            return std::pow(1.0 - per_bin, b_floor) * (1.0 - b_frac * per_bin);
        };
        const double ps_exact = 1.0 - no_event(q * rc.storage.eta_sb);
        const double nb_rapid =
            stored_mean_before_switchoff(rc.n_g, rc.storage, StorageMode::rapid);
        const double leak = rc.n0 * rc.storage.eta_sb * nb_rapid;
        const double eps_exact =
            ((1.0 - ps_exact) * n_out + ps_exact * rc.n_t * std::exp(-od_b) + leak) / n_out;
        s.check_sigma(3, "simulate_cycles eps vs exact composition (1e6)", rsum.eps_global,
                      eps_exact, rsum.eps_total.stderr_shot);

        const double ph_exact =
            1.0 - (1.0 - rc.herald.p_h0) *
                      no_event(q * rc.herald.eta_wr * rc.herald.eta_det);
        s.check_sigma(3, "simulate_cycles p_h vs exact composition (1e6)", rsum.p_h, ph_exact,
                      rsum.p_h_se);
    }

    // background herald rate with no gate photons
    mc::Scenario sc0 = sc;
    sc0.n_g = 0.0;
    const mc::CycleSummary sum0 = mc::simulate_cycles(100000, sc0, 20140605, 1);
    s.check_sigma(3, "herald rate at N_g=0", sum0.p_h, p.herald().p_h0, sum0.p_h_se);
    s.progress("criterion 3 done");
}

// ---------------------------------------------------------------- 4 ----

struct RoundTrip {
    std::string name;
    // builds a noisy DataSeries for one seed
    std::function<DataSeries(CounterRng&)> generate;
    // fits and returns (value, std_error, truth) triplets
    std::function<std::vector<std::array<double, 3>>(const DataSeries&)> recover;
};

std::vector<std::array<double, 3>> fit_and_extract(
    const ModelInfo& model, const DataSeries& data, const std::vector<std::string>& free_names,
    const ParamMap& fixed_overrides, const ParamMap& init,
    const std::map<std::string, std::pair<double, double>>& bounds, const ParamMap& truth) {
    FitProblem prob;
    prob.model = model.fn;
    prob.free_params = free_names;
    prob.initial = init;
    prob.bounds = bounds;
    for (const auto& spec : model.params) {
        if (std::find(free_names.begin(), free_names.end(), spec.name) != free_names.end())
            continue;
        const auto it = fixed_overrides.find(spec.name);
        prob.fixed[spec.name] = (it != fixed_overrides.end()) ? it->second : spec.value;
    }
    const FitResult res = fit(prob, data);
    std::vector<std::array<double, 3>> out;
    if (!res.converged) return out; // empty = failure
    for (const auto& name : free_names)
        out.push_back({res.values.at(name), res.std_errors.at(name), truth.at(name)});
    return out;
}

DataSeries sample_model(const ModelInfo& model, const ParamMap& params,
                        const std::vector<double>& xs, double rel_noise, double abs_noise,
                        CounterRng& rng) {
    DataSeries d;
    for (double x : xs) {
        const double y = model.fn(x, params);
        const double sigma = std::abs(y) * rel_noise + abs_noise;
        d.x.push_back(x);
        d.y.push_back(y + sigma * rng.normal());
        d.sigma.push_back(sigma);
    }
    return d;
}

void criterion4_roundtrips(Suite& s) {
    const Preset& p = paper2014();
    std::vector<RoundTrip> trips;

    // -- (T0 = 0.30, b = 1.6), target transmission
    {
        const ModelInfo& m = *find_model("transmitted_mean");
        const std::vector<double> xs = {0.1, 0.7, 1.3, 1.9, 2.5, 3.1, 3.8, 4.4, 5.0, 5.7, 6.3, 7.0};
        trips.push_back(
            {"transmitted_mean (T0, b)",
             [&, xs](CounterRng& rng) { return sample_model(m, m.defaults(), xs, 0.05, 0.0, rng); },
             [&](const DataSeries& d) {
                 return fit_and_extract(m, d, {"t0", "b"}, {}, {{"t0", 0.5}, {"b", 1.0}},
                                        {{"t0", {0.01, 1.0}}, {"b", {0.1, 20.0}}},
                                        {{"t0", 0.30}, {"b", 1.6}});
             }});
    }
    // -- (b = 2.0, eta_sb = 0.29), storage, full binning model
    {
        const ModelInfo& m = *find_model("extinction_vs_ng_full");
        const std::vector<double> xs = {0.0, 0.17, 0.35, 0.7, 1.0, 1.4, 2.0, 2.8, 4.0};
        trips.push_back(
            {"extinction_vs_ng full (b, eta_sb)",
             [&, xs](CounterRng& rng) { return sample_model(m, m.defaults(), xs, 0.0, 0.01, rng); },
             [&](const DataSeries& d) {
                 return fit_and_extract(m, d, {"b", "eta_sb"}, {}, {{"b", 1.5}, {"eta_sb", 0.2}},
                                        {{"b", {0.2, 10.0}}, {"eta_sb", {0.0, 1.0}}},
                                        {{"b", 2.0}, {"eta_sb", 0.29}});
             }});
    }
    // -- (b = 3.2, eta_sb = 0.31), storage, rapid-blockade model
    {
        const ModelInfo& m = *find_model("extinction_vs_ng_rapid");
        const std::vector<double> xs = {0.0, 0.17, 0.35, 0.7, 1.0, 1.4, 2.0, 2.8, 4.0};
        trips.push_back(
            {"extinction_vs_ng rapid (b, eta_sb)",
             [&, xs](CounterRng& rng) { return sample_model(m, m.defaults(), xs, 0.0, 0.01, rng); },
             [&](const DataSeries& d) {
                 return fit_and_extract(m, d, {"b", "eta_sb"}, {}, {{"b", 2.0}, {"eta_sb", 0.2}},
                                        {{"b", {0.2, 10.0}}, {"eta_sb", {0.0, 1.0}}},
                                        {{"b", 3.2}, {"eta_sb", 0.31}});
             }});
    }
    // -- (eps_ideal = 0.022, N_post0 = 0.7), postselection background model
    {
        const ModelInfo& m = *find_model("postselected_extinction_vs_ng");
        const std::vector<double> xs = {0.05, 0.1, 0.17, 0.25, 0.35, 0.5,
                                        0.7,  1.0, 1.4,  2.0,  2.8,  4.0};
        trips.push_back(
            {"postselected extinction (eps_ideal, n_post0)",
             [&, xs](CounterRng& rng) { return sample_model(m, m.defaults(), xs, 0.0, 0.005, rng); },
             [&](const DataSeries& d) {
                 return fit_and_extract(m, d, {"eps_ideal", "n_post0"}, {},
                                        {{"eps_ideal", 0.05}, {"n_post0", 0.5}},
                                        {{"eps_ideal", {0.0, 1.0}}, {"n_post0", {0.05, 5.0}}},
                                        {{"eps_ideal", 0.022}, {"n_post0", 0.7}});
             }});
    }
    // -- (OD_b0 = 5.4), postselected switch curve
    {
        const ModelInfo& m = *find_model("extinction_post_vs_nt");
        const std::vector<double> xs = {0.3, 0.6, 1.0, 1.5, 2.1, 2.8, 3.6, 4.5, 5.5, 7.0};
        trips.push_back(
            {"extinction_post_vs_nt (od_b0)",
             [&, xs](CounterRng& rng) { return sample_model(m, m.defaults(), xs, 0.10, 0.0, rng); },
             [&](const DataSeries& d) {
                 return fit_and_extract(m, d, {"od_b0"}, {}, {{"od_b0", 4.0}},
                                        {{"od_b0", {0.5, 12.0}}}, {{"od_b0", 5.4}});
             }});
    }
    // -- (p_s = 0.23), total-ensemble switch curve
    {
        const ModelInfo& m = *find_model("extinction_total_vs_nt");
        const std::vector<double> xs = {0.3, 0.6, 1.0, 1.5, 2.1, 2.8, 3.6, 4.5, 5.5, 7.0};
        trips.push_back(
            {"extinction_total_vs_nt (p_s)",
             [&, xs](CounterRng& rng) { return sample_model(m, m.defaults(), xs, 0.0, 0.01, rng); },
             [&](const DataSeries& d) {
                 return fit_and_extract(m, d, {"p_s"}, {}, {{"p_s", 0.15}},
                                        {{"p_s", {0.0, 1.0}}}, {{"p_s", 0.23}});
             }});
    }
    // -- (b = 2.0, eta_wr = 0.016), heralding probability
    {
        const ModelInfo& m = *find_model("herald_probability");
        const std::vector<double> xs = {0.1, 0.2, 0.35, 0.5, 0.7, 1.0, 1.4, 2.0, 2.8, 4.0};
        trips.push_back(
            {"herald_probability (b, eta_wr)",
             [&, xs](CounterRng& rng) { return sample_model(m, m.defaults(), xs, 0.05, 0.0, rng); },
             [&](const DataSeries& d) {
                 return fit_and_extract(m, d, {"b", "eta_wr"}, {},
                                        {{"b", 1.5}, {"eta_wr", 0.01}},
                                        {{"b", {0.2, 10.0}}, {"eta_wr", {1e-4, 0.5}}},
                                        {{"b", 2.0}, {"eta_wr", 0.016}});
             }});
    }
    // -- (N1 = 23), density-depletion line rho/rho0 = 1 - N_t/N1
    trips.push_back(
        {"density depletion (N1)",
         [&](CounterRng& rng) {
             DataSeries d;
             for (double x = 0.0; x <= 7.01; x += 1.0) {
                 d.x.push_back(x);
                 d.y.push_back(1.0 - x / p.models.n1 + 0.01 * rng.normal());
                 d.sigma.push_back(0.01);
             }
             return d;
         },
         [&](const DataSeries& d) {
             const FitResult r = fit_linear(d);
             const double slope = r.values.at("slope");
             const double n1 = -1.0 / slope;
             const double se = r.std_errors.at("slope") / (slope * slope);
             return std::vector<std::array<double, 3>>{{n1, se, p.models.n1}};
         }});
    // -- (tau_pop = 60 us and 24 us), blockade decay
    for (const double tau : {60e-6, 24e-6}) {
        trips.push_back(
            {fmt("blockade decay (tau_pop = %.0f us)", tau * 1e6),
             [&, tau](CounterRng& rng) {
                 DataSeries d;
                 const DecayParams dec{tau, 0.0, 0.0};
                 const double t_lo = (tau > 40e-6) ? 10e-6 : 5e-6;
                 const double t_hi = (tau > 40e-6) ? 150e-6 : 100e-6;
                 for (int i = 0; i < 15; ++i) {
                     const double t = t_lo + (t_hi - t_lo) * i / 14.0;
                     d.x.push_back(t);
                     d.y.push_back(blockade_decay(t, p.models.eps_decay_start, dec) +
                                   0.01 * rng.normal());
                     d.sigma.push_back(0.01);
                 }
                 return d;
             },
             [&, tau](const DataSeries& d) {
                 const FitResult r = fit_exponential(d, ExpModel::extinction_recovery);
                 std::vector<std::array<double, 3>> out;
                 if (!r.converged) return out;
                 out.push_back({r.values.at("tau_pop"), r.std_errors.at("tau_pop"), tau});
                 return out;
             }});
    }
    // -- (gamma0 = 0.8 / us), dephasing-rate intercept
    trips.push_back(
        {"dephasing rate intercept (gamma0)",
         [&](CounterRng& rng) {
             DataSeries d;
             const DecayParams dec{1.0, p.models.gamma0, p.models.k_rho};
             for (int i = 0; i < 10; ++i) {
                 const double rho = 2e18 * i;
                 d.x.push_back(rho);
                 d.y.push_back(dephasing_rate(rho, dec) + 0.03e6 * rng.normal());
                 d.sigma.push_back(0.03e6);
             }
             return d;
         },
         [&](const DataSeries& d) {
             const FitResult r = fit_linear(d);
             return std::vector<std::array<double, 3>>{
                 {r.values.at("intercept"), r.std_errors.at("intercept"), p.models.gamma0}};
         }});

    const int n_seeds = 20;
    int trip_index = 0;
    for (const auto& trip : trips) {
        int successes = 0;
        for (int seed = 0; seed < n_seeds; ++seed) {
            CounterRng rng(41000 + trip_index, seed);
            const DataSeries data = trip.generate(rng);
            std::vector<std::array<double, 3>> rec;
            try {
                rec = trip.recover(data);
            } catch (const std::exception&) {
                rec.clear();
            }
            if (rec.empty()) continue;
            bool ok = true;
            for (const auto& [value, se, truth] : rec)
                if (!(se > 0) || std::abs(value - truth) > 3.0 * se) ok = false;
            if (ok) ++successes;
        }
        s.check(4, trip.name, successes >= 18,
                fmt("%d/%d seeds recovered all parameters within 3 standard errors", successes,
                    n_seeds));
        ++trip_index;
    }
    s.progress("criterion 4 done");
}

// ---------------------------------------------------------------- 5 ----

void criterion5_identities(Suite& s) {
    const Preset& p = paper2014();

    StorageParams full = p.storage_full();
    s.check_abs(5, "beta from (eta_sb=0.29, od_eit=0.91)", initial_slope_beta(full), 0.19,
                0.005);

    StorageParams rapid = p.storage_rapid();
    const double nb = stored_mean_before_switchoff(1.0, rapid, StorageMode::rapid);
    s.check_abs(5, "N_b rapid (b=3.2, N_g=1)", nb, 0.56, 0.01);

    s.check_abs(5, "eta_sb = p_s / N_b chain", p.models.p_s / nb, 0.41, 0.005);

    s.check_abs(5, "od_b0 estimate 2 r_b / l_a", od_b0_estimate(14e-6, 5e-6), 5.6, 1e-12);
    s.progress("criterion 5 done");
}

// ---------------------------------------------------------------- 6 ----

void criterion6_properties(Suite& s) {
    const Preset& p = paper2014();

    // probability conservation along z
    {
        double worst = 0;
        for (const double od : {3.2, 10.0})
            for (const double mu0 : {0.5, 4.0}) {
                const MediumParams m = MediumParams::from_depths(od, 0.91);
                const BinDistribution init = BinDistribution::poisson(mu0);
                const double total0 = init.total();
                for (const double z : {0.25, 0.5, 1.0}) {
                    const BinDistribution out = evolve_bin(init, m, z * m.length);
                    worst = std::max(worst, std::abs(out.total() - total0));
                }
            }
        s.check(6, "probability conservation", worst < 1e-9,
                fmt("worst |sum p(z) - sum p(0)| = %.2e (tol 1e-9)", worst));
    }

    // bin mean non-increasing in z
    {
        bool ok = true;
        const MediumParams m = MediumParams::from_depths(3.2, 0.91);
        for (const double mu0 : {0.1, 1.0, 4.0}) {
            double prev = bin_mean_analytic(mu0, m, 0.0, MeanForm::exact_series);
            for (int i = 1; i <= 20; ++i) {
                const double cur =
                    bin_mean_analytic(mu0, m, i * m.length / 20.0, MeanForm::exact_series);
                if (cur > prev + 1e-12) ok = false;
                prev = cur;
            }
        }
        s.check(6, "bin mean monotone in z", ok, "20-point z grids at mu0 in {0.1, 1, 4}");
    }

    // extinction monotone decreasing in N_g, both storage modes
    {
        bool ok = true;
        for (const StorageMode mode : {StorageMode::full, StorageMode::rapid}) {
            const StorageParams sp =
                (mode == StorageMode::full) ? p.storage_full() : p.storage_rapid();
            double prev = extinction_vs_ng(0.0, sp, mode);
            for (int i = 1; i <= 40; ++i) {
                const double cur = extinction_vs_ng(i * 0.1, sp, mode);
                if (cur > prev + 1e-12) ok = false;
                prev = cur;
            }
        }
        s.check(6, "extinction monotone in N_g", ok, "both storage modes, N_g up to 4");
    }

    // exact limit identities
    {
        const double tol = 1e-12;
        const auto& c = p.config;
        double worst = 0;
        auto rel = [&](double a, double b) {
            const double r = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
            worst = std::max(worst, r);
            return r;
        };
        bool ok = true;

        ok &= rel(transmitted_mean(0.0, 1.6, 0.3), 0.0) <= tol; // exact zero both sides
        ok &= std::abs(transmitted_mean(0.0, 1.6, 0.3)) <= tol;
        ok &= rel(extinction_vs_ng(0.0, p.storage_full(), StorageMode::full), 1.0) <= tol;
        const MediumParams m = MediumParams::from_depths(3.2, 0.91);
        ok &= rel(bin_mean_analytic(0.7, m, 0.0, MeanForm::neglected), 0.7) <= tol;
        ok &= rel(bin_mean_analytic(0.7, m, 0.0, MeanForm::exact_series), 0.7) <= tol;
        const auto [dg, dt] = rydberg_dipole_elements(100);
        ok &= rel(dt / dg, std::sqrt(2.0)) <= tol;
        const double om = 2.9531e7;
        ok &= rel(blockade_radius(c.c6, c.gamma, 8.0 * om),
                  blockade_radius(c.c6, c.gamma, om) / 2.0) <= tol;
        ok &= rel(eit::transparency_width(2.0 * om, c.gamma, 3.5),
                  4.0 * eit::transparency_width(om, c.gamma, 3.5)) <= tol;
        ok &= rel(eit::correlation_time_prediction(10.0, c.gamma, 2.0 * om),
                  eit::correlation_time_prediction(10.0, c.gamma, om) / 4.0) <= tol;
        ExperimentConfig c2 = c;
        c2.atom_number *= 2.0;
        ok &= rel(cloud_geometry(c2).peak_density, 2.0 * cloud_geometry(c).peak_density) <= tol;
        ok &= rel(absorption_length(1.2e18, 0.25, c.signal_wavelength),
                  2.0 * absorption_length(1.2e18, 0.5, c.signal_wavelength)) <= tol;
        ok &= std::abs(dipole_potential(c.alpha_pol, 0.0, 0.018).first) <= tol;
        ok &= std::abs(eit::resonant_od_with_dephasing(3.5, om, c.gamma, 0.0)) <= tol;
        ok &= rel(eit::group_velocity(om, 2.0 * 5e-6, c.gamma),
                  2.0 * eit::group_velocity(om, 5e-6, c.gamma)) <= tol;
        ok &= std::abs(beam_field_amplitude(0.0, 12e-6)) <= tol;
        eit::SpectrumParams sp = p.eit_gate_spectrum();
        ok &= rel(eit::transmission(0.0, sp), std::exp(-sp.od) + sp.t0) <= tol;

        // total-ensemble formula degenerates to the postselected one
        SwitchParams sw = p.switch_params();
        sw.p_s = 1.0;
        sw.n0 = 0.0;
        for (double nt = 0.4; nt <= 4.0; nt += 0.4)
            ok &= rel(extinction_total_vs_nt(nt, sw), extinction_post_vs_nt(nt, sw)) <= tol;

        s.check(6, "exact limit identities", ok, fmt("worst rel dev %.2e (tol 1e-12)", worst));
    }

    // Jacobian consistency across the model registry
    {
        double worst = 0;
        std::string worst_at = "-";
        CounterRng rng(616161, 0);
        for (const auto& model : model_registry()) {
            ParamMap params = model.defaults();
            for (int trial = 0; trial < 20; ++trial) {
                for (const auto& spec : model.params)
                    params[spec.name] = spec.lo + (spec.hi - spec.lo) * rng.uniform();
                for (int k = 0; k < 5; ++k) {
                    const double x = model.x_lo + (model.x_hi - model.x_lo) * rng.uniform();
                    for (const auto& spec : model.params) {
                        const double theta = params.at(spec.name);
                        auto deriv = [&](double h) {
                            ParamMap q = params;
                            const double up = std::min(theta + h, spec.hi);
                            const double dn = std::max(theta - h, spec.lo);
                            q[spec.name] = up;
                            const double fu = model.fn(x, q);
                            q[spec.name] = dn;
                            return (fu - model.fn(x, q)) / (up - dn);
                        };
                        const double h1 =
                            1e-6 * std::max(std::abs(theta), 1e-3 * (spec.hi - spec.lo));
                        const double d1 = deriv(h1);
                        const double d2 = deriv(8.0 * h1);
                        const double scale =
                            std::max({std::abs(d1), std::abs(d2), 1e-7 / h1});
                        const double rel = std::abs(d1 - d2) / scale;
                        if (rel > worst) {
                            worst = rel;
                            worst_at = model.name + "/" + spec.name;
                        }
                    }
                }
            }
        }
        s.check(6, "Jacobian vs finite differences", worst <= 1e-5,
                fmt("worst rel dev %.2e at %s (tol 1e-5)", worst, worst_at.c_str()));
    }
    s.progress("criterion 6: analytic properties done");

    // Poissonian g2 baseline
    {
        const auto clicks = mc::generate_poisson_clicks(60000, 3e6, 2e-6, 313131);
        const auto rows = mc::estimate_g2(clicks, 0.2e-6, 1.0e-6);
        bool ok = true;
        double worst = 0;
        for (const auto& row : rows) {
            if (row.flagged) continue;
            const double dev = std::abs(row.g2 - 1.0) / row.se;
            worst = std::max(worst, dev);
            if (dev > 3.0) ok = false;
        }
        s.check(6, "g2 Poissonian baseline", ok,
                fmt("all bins within 3 sigma of 1 (worst %.2f sigma)", worst));
    }

    // antibunching of single-excitation retrieval; pooled over the complete
    // pulse window (the lag bins span one window width each)
    {
        const auto clicks = mc::generate_retrieval_clicks(400000, 0.10, 0.005, 0.3e-6, 424242);
        const auto rows = mc::estimate_g2(clicks, 0.3e-6, 0.3e-6);
        std::uint64_t same = 0, shuf = 0;
        for (const auto& row : rows) {
            same += row.coincidences;
            shuf += row.shuffled;
        }
        const double g2_0 = (shuf > 0) ? static_cast<double>(same) / shuf : INFINITY;
        s.check(6, "g2(0) < 0.5 for single-excitation retrieval",
                g2_0 < 0.5 && same >= 10,
                fmt("g2(0) = %.3f pooled over the pulse, %llu coincidences", g2_0,
                    static_cast<unsigned long long>(same)));
    }
    s.progress("criterion 6 done");
}

// ---------------------------------------------------------------- 7 ----

void criterion7_report(Suite& s) {
    const Preset& p = paper2014();
    const mc::Scenario sc = p.scenario(StorageMode::full);
    const mc::CycleSummary sum = mc::simulate_cycles(1000000, sc, 20140606, 1);

    const StorageParams stor = p.storage_full();
    const double nb = stored_mean_before_switchoff(sc.n_g, stor, StorageMode::full);
    const double ps_model = stor.eta_sb * nb;
    const double n_out = transmitted_mean(sc.n_t, sc.target_bins, sc.target_t0);
    const double od_b = sc.od_b0 * (1.0 - sc.n_t / sc.n1);
    const double blocked = sc.n_t * std::exp(-od_b) + sc.n0;
    const double eps_model = ((1.0 - ps_model) * n_out + ps_model * blocked) / n_out;

    s.check(7, "measured extinction (reported, not asserted)", true,
            fmt("measured 0.812 +- 0.001; model %.3f; MC %.3f +- %.3f (model-experiment gap "
                "acknowledged)",
                eps_model, sum.eps_total.value, sum.eps_total.stderr_sample));
    s.check(7, "measured postselected extinction (reported, not asserted)", true,
            fmt("measured 0.051 +- 0.004; MC %.3f +- %.3f (shot) / +- %.3f (jackknife); "
                "fitted ideal value 0.022",
                sum.eps_post, sum.eps_post_shot_se, sum.eps_post_jack_se));
    s.progress("criterion 7 done");
}

} // namespace

bool AcceptanceReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

bool AcceptanceReport::criterion_pass(int criterion) const {
    for (const auto& c : checks)
        if (c.criterion == criterion && !c.pass) return false;
    return true;
}

std::string AcceptanceReport::render() const {
    std::ostringstream os;
    int last = 0;
    static const char* kTitles[] = {
        "",
        "derived-parameter reproduction",
        "closed form vs master-equation ODE",
        "Monte Carlo vs analytic",
        "published-fit round-trips",
        "derived identities",
        "property suites",
        "experimental outcomes (reported only)",
    };
    for (const auto& c : checks) {
        if (c.criterion != last) {
            os << "criterion " << c.criterion << ": " << kTitles[c.criterion] << "\n";
            last = c.criterion;
        }
        os << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name << ": " << c.detail << "\n";
    }
    os << "\n";
    for (int k = 1; k <= 7; ++k) {
        bool any = false;
        for (const auto& c : checks)
            if (c.criterion == k) any = true;
        if (!any) continue;
        os << "criterion " << k << " [" << (criterion_pass(k) ? "PASS" : "FAIL") << "] "
           << kTitles[k] << "\n";
    }
    os << "overall: " << (all_pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

AcceptanceReport run_acceptance(std::ostream* log) {
    Suite s(log);
    criterion1_derived(s);
    criterion2_ode(s);
    criterion3_montecarlo(s);
    criterion4_roundtrips(s);
    criterion5_identities(s);
    criterion6_properties(s);
    criterion7_report(s);
    return s.take();
}

} // namespace switchsim
