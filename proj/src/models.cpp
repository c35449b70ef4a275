#include "switchsim/models.hpp"

#include <cmath>

#include "switchsim/constants.hpp"
#include "switchsim/eit.hpp"
#include "switchsim/propagation.hpp"
#include "switchsim/storage.hpp"

namespace switchsim {

ParamMap ModelInfo::defaults() const {
    ParamMap m;
    for (const auto& p : params) m[p.name] = p.value;
    return m;
}

namespace {

StorageParams storage_from(const ParamMap& p, bool with_od) {
    StorageParams s;
    s.eta_sb = p.at("eta_sb");
    s.bins = p.at("b");
    s.od_eit = p.at("od_eit");
    s.od = with_od ? p.at("od") : 0.0;
    return s;
}

SwitchParams switch_from(const ParamMap& p) {
    SwitchParams s;
    s.od_b0 = p.at("od_b0");
    s.n1 = p.at("n1");
    s.t0 = p.at("t0");
    s.bins = p.at("b");
    s.p_s = p.count("p_s") ? p.at("p_s") : 1.0;
    s.n0 = 0.0;
    return s;
}

std::vector<ModelInfo> build_registry() {
    const double mhz = kTwoPi * 1e6;
    std::vector<ModelInfo> reg;

    reg.push_back({
        "eit_transmission",
        "T = exp(-od/(1+(2(x-delta0)/gamma)^2)) + t0 exp(-4 (x-delta1)^2 ln2 / delta_t^2)",
        "delta_s[rad/s]",
        -20.0 * mhz, 20.0 * mhz,
        {{"od", 3.2, 0.5, 15.0},
         {"gamma", 5.75 * mhz, 2.0 * mhz, 10.0 * mhz},
         {"delta0", 0.0, -3.0 * mhz, 3.0 * mhz},
         {"delta1", 0.0, -3.0 * mhz, 3.0 * mhz},
         {"t0", std::exp(-0.91), 0.05, 1.0},
         {"delta_t", 1.7 * mhz, 0.3 * mhz, 8.0 * mhz}},
        [](double x, const ParamMap& p) {
            eit::SpectrumParams sp;
            sp.od = p.at("od");
            sp.gamma = p.at("gamma");
            sp.delta0 = p.at("delta0");
            sp.delta1 = p.at("delta1");
            sp.t0 = p.at("t0");
            sp.delta_t = p.at("delta_t");
            return eit::transmission(x, sp);
        },
    });

    reg.push_back({
        "transmitted_mean",
        "N_out = b t0 (1 - exp(-x/b))",
        "n_in",
        0.0, 7.0,
        {{"t0", 0.30, 0.02, 1.0}, {"b", 1.6, 0.2, 10.0}},
        [](double x, const ParamMap& p) { return transmitted_mean(x, p.at("b"), p.at("t0")); },
    });

    reg.push_back({
        "extinction_vs_ng_full",
        "eps = 1 - eta_sb N_b_full(x; b, od, od_eit)",
        "n_g",
        0.0, 4.0,
        {{"b", 2.0, 0.3, 10.0},
         {"eta_sb", 0.29, 0.0, 1.0},
         {"od", 3.2, 1.6, 12.0},
         {"od_eit", 0.91, 0.1, 1.5}},
        [](double x, const ParamMap& p) {
            return extinction_vs_ng(x, storage_from(p, true), StorageMode::full);
        },
    });

    reg.push_back({
        "extinction_vs_ng_rapid",
        "eps = 1 - eta_sb b (1-e^-od_eit)/od_eit (1 - exp(-x/b))",
        "n_g",
        0.0, 4.0,
        {{"b", 3.2, 0.3, 10.0}, {"eta_sb", 0.31, 0.0, 1.0}, {"od_eit", 0.91, 0.1, 1.5}},
        [](double x, const ParamMap& p) {
            return extinction_vs_ng(x, storage_from(p, false), StorageMode::rapid);
        },
    });

    reg.push_back({
        "herald_probability",
        "p_h = eta_wr eta_det N_b_rapid(x; b, od_eit) + p_h0",
        "n_g",
        0.0, 4.0,
        {{"b", 2.0, 0.3, 10.0},
         {"eta_wr", 0.016, 1e-4, 0.5},
         {"eta_det", 0.27, 0.05, 1.0},
         {"od_eit", 0.91, 0.1, 1.5},
         {"p_h0", 1.4e-4, 0.0, 1e-2}},
        [](double x, const ParamMap& p) {
            HeraldParams h{p.at("eta_wr"), p.at("eta_det"), p.at("p_h0")};
            StorageParams s;
            s.eta_sb = 1.0; // unused by the rapid N_b
            s.bins = p.at("b");
            s.od_eit = p.at("od_eit");
            return herald_probability(x, h, s, StorageMode::rapid);
        },
    });

    reg.push_back({
        "postselected_extinction_vs_ng",
        "eps_post = (1-q) eps_ideal + q eps_total(x) n_total_ref / n_post0,  q = p_h0/p_h(x)",
        "n_g",
        0.05, 4.0,
        {{"eps_ideal", 0.022, 0.0, 1.0},
         {"n_post0", 0.7, 0.05, 5.0},
         {"herald_b", 2.0, 0.3, 10.0},
         {"eta_wr", 0.016, 1e-4, 0.5},
         {"eta_det", 0.27, 0.05, 1.0},
         {"p_h0", 1.4e-4, 1e-6, 1e-2},
         {"od_eit", 0.91, 0.1, 1.5},
         {"stor_b", 2.0, 0.3, 10.0},
         {"eta_sb", 0.29, 0.0, 1.0},
         {"stor_od", 3.2, 1.6, 12.0},
         {"n_total_ref", 0.314116, 0.05, 2.0}},
        [](double x, const ParamMap& p) {
            HeraldParams h{p.at("eta_wr"), p.at("eta_det"), p.at("p_h0")};
            StorageParams hs;
            hs.eta_sb = 1.0;
            hs.bins = p.at("herald_b");
            hs.od_eit = p.at("od_eit");
            StorageParams ts;
            ts.eta_sb = p.at("eta_sb");
            ts.bins = p.at("stor_b");
            ts.od = p.at("stor_od");
            ts.od_eit = p.at("od_eit");
            const double n_ref = p.at("n_total_ref");
            auto total = [&](double ng) {
                return extinction_vs_ng(ng, ts, StorageMode::full) * n_ref;
            };
            return postselected_extinction_vs_ng(x, p.at("eps_ideal"), p.at("n_post0"), h, hs,
                                                 total, StorageMode::rapid);
        },
    });

    reg.push_back({
        "extinction_post_vs_nt",
        "eps_post = x exp(-od_b0 (1 - x/n1)) / (b t0 (1 - exp(-x/b)))",
        "n_t",
        0.2, 7.0,
        {{"od_b0", 5.4, 0.5, 12.0},
         {"n1", 23.0, 8.0, 100.0},
         {"b", 1.6, 0.2, 10.0},
         {"t0", 0.30, 0.02, 1.0}},
        [](double x, const ParamMap& p) { return extinction_post_vs_nt(x, switch_from(p)); },
    });

    reg.push_back({
        "extinction_total_vs_nt",
        "eps = ((1-p_s) N_out + p_s x exp(-od_b) + ps_n0) / N_out",
        "n_t",
        0.2, 7.0,
        {{"p_s", 0.23, 0.0, 1.0},
         {"ps_n0", 0.014, 0.0, 0.2},
         {"od_b0", 5.4, 0.5, 12.0},
         {"n1", 23.0, 8.0, 100.0},
         {"b", 1.6, 0.2, 10.0},
         {"t0", 0.30, 0.02, 1.0}},
        [](double x, const ParamMap& p) {
            SwitchParams s = switch_from(p);
            const double n_out = transmitted_mean(x, s.bins, s.t0);
            const double blocked = x * std::exp(-blockaded_od(x, s)) * p.at("p_s") + p.at("ps_n0");
            return ((1.0 - p.at("p_s")) * n_out + blocked) / n_out;
        },
    });

    reg.push_back({
        "blockade_decay",
        "eps = 1 - (1 - eps0) exp(-x/tau_pop)",
        "t_d[s]",
        0.0, 1.5e-4,
        {{"eps0", 0.8, 0.0, 1.0}, {"tau_pop", 60e-6, 2e-6, 1e-3}},
        [](double x, const ParamMap& p) {
            DecayParams d{p.at("tau_pop"), 0.0, 0.0};
            return blockade_decay(x, p.at("eps0"), d);
        },
    });

    reg.push_back({
        "exp_decay",
        "y = amplitude exp(-rate x)",
        "t[s]",
        0.0, 3e-6,
        {{"amplitude", 1.0, 0.05, 100.0}, {"rate", 1.1e6, 1e3, 1e8}},
        [](double x, const ParamMap& p) {
            return p.at("amplitude") * std::exp(-p.at("rate") * x);
        },
    });

    reg.push_back({
        "linear",
        "y = intercept + slope x",
        "x",
        0.0, 10.0,
        {{"intercept", 0.0, -100.0, 100.0}, {"slope", 1.0, -100.0, 100.0}},
        [](double x, const ParamMap& p) { return p.at("intercept") + p.at("slope") * x; },
    });

    reg.push_back({
        "dephasing_rate_vs_density",
        "rate = gamma0 + k_rho x",
        "rho[1/m^3]",
        0.0, 2e19,
        {{"gamma0", 0.8e6, 0.0, 1e7}, {"k_rho", 1.5e-13, 0.0, 1e-11}},
        [](double x, const ParamMap& p) {
            DecayParams d{1.0, p.at("gamma0"), p.at("k_rho")};
            return dephasing_rate(x, d);
        },
    });

    reg.push_back({
        "g2_dip",
        "g2 = 1 - depth exp(-x^2/(2 width^2))",
        "tau[s]",
        -1.5e-6, 1.5e-6,
        {{"depth", 1.0, 0.0, 1.2}, {"width", 0.23e-6, 2e-8, 5e-6}},
        [](double x, const ParamMap& p) {
            const double w = p.at("width");
            return 1.0 - p.at("depth") * std::exp(-x * x / (2.0 * w * w));
        },
    });

    return reg;
}

} // namespace

const std::vector<ModelInfo>& model_registry() {
    static const std::vector<ModelInfo> reg = build_registry();
    return reg;
}

const ModelInfo* find_model(const std::string& name) {
    for (const auto& m : model_registry())
        if (m.name == name) return &m;
    return nullptr;
}

std::vector<std::string> model_names() {
    std::vector<std::string> out;
    for (const auto& m : model_registry()) out.push_back(m.name);
    return out;
}

} // namespace switchsim
