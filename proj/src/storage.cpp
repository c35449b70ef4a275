#include "switchsim/storage.hpp"

#include <cmath>
#include <stdexcept>

#include "switchsim/expint.hpp"
#include "switchsim/propagation.hpp"

namespace switchsim {

namespace {

// (1 - e^{-x})/x, stable at small x
double expm1_ratio(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - 0.5 * x;
    return -std::expm1(-x) / x;
}

void warn(Warnings* w, const std::string& msg) {
    if (w) w->push_back(msg);
}

} // namespace

void StorageParams::validate() const {
    if (!(eta_sb >= 0 && eta_sb <= 1))
        throw std::domain_error("StorageParams: eta_sb must be in [0,1]");
    if (!(bins > 0)) throw std::domain_error("StorageParams: bins must be > 0");
    if (!(od_eit > 0)) throw std::domain_error("StorageParams: od_eit must be > 0");
    // od only enters the full-mode formula; checked there
}

double stored_mean_before_switchoff(double n_in, const StorageParams& p, StorageMode mode) {
    p.validate();
    if (n_in < 0) throw std::domain_error("stored_mean_before_switchoff: N_in must be >= 0");
    if (n_in == 0.0) return 0.0;
    const double mu0 = n_in / p.bins;
    const double eit_factor = expm1_ratio(p.od_eit);
    if (mode == StorageMode::rapid)
        return p.bins * eit_factor * (-std::expm1(-mu0));

    if (!(p.od > p.od_eit))
        throw std::domain_error("stored_mean_before_switchoff: full mode needs od > od_eit");
    const double mu_l = mu0 * std::exp(-p.od);
    // spatial integral of the bin mean over the pulse, in depth units
    const double term_eit = eit_factor * (-std::expm1(-mu0));
    const double term_lin = (mu0 - mu_l) / p.od;
    const double term_e1 = (expint_e1(mu_l) - expint_e1(mu0)) / p.od;
    return p.bins * (term_eit - 1.0 + term_lin + term_e1);
}

double extinction_vs_ng(double n_g, const StorageParams& p, StorageMode mode, Warnings* warnings) {
    const double nb = stored_mean_before_switchoff(n_g, p, mode);
    const double eps = 1.0 - p.eta_sb * nb;
    if (eps < 0) {
        warn(warnings, "extinction_vs_ng: eta_sb*N_b > 1 at N_g=" + std::to_string(n_g) +
                           "; linearized storage model out of its regime, clamping to 0");
        return 0.0;
    }
    return eps;
}

double initial_slope_beta(const StorageParams& p) {
    p.validate();
    return p.eta_sb * expm1_ratio(p.od_eit);
}

void HeraldParams::validate() const {
    if (!(eta_wr >= 0 && eta_wr <= 1))
        throw std::domain_error("HeraldParams: eta_wr must be in [0,1]");
    if (!(eta_det > 0 && eta_det <= 1))
        throw std::domain_error("HeraldParams: eta_det must be in (0,1]");
    if (!(p_h0 >= 0 && p_h0 <= 1))
        throw std::domain_error("HeraldParams: p_h0 must be in [0,1]");
}

double herald_probability(double n_g, const HeraldParams& h, const StorageParams& p,
                          StorageMode mode) {
    h.validate();
    if (n_g < 0) throw std::domain_error("herald_probability: N_g must be >= 0");
    return h.eta_wr * h.eta_det * stored_mean_before_switchoff(n_g, p, mode) + h.p_h0;
}

double postselected_extinction_vs_ng(double n_g, double eps_ideal, double n_trans_post0,
                                     const HeraldParams& h, const StorageParams& p,
                                     const std::function<double(double)>& total_model,
                                     StorageMode mode) {
    if (!(n_trans_post0 > 0))
        throw std::domain_error("postselected_extinction_vs_ng: N_trans_post0 must be > 0");
    const double ph = herald_probability(n_g, h, p, mode);
    if (!(ph > 0))
        throw std::domain_error("postselected_extinction_vs_ng: p_h(N_g) = 0, ratio undefined");
    const double q = h.p_h0 / ph;
    return (1.0 - q) * eps_ideal + q * total_model(n_g) / n_trans_post0;
}

void SwitchParams::validate() const {
    if (!(od_b0 > 0)) throw std::domain_error("SwitchParams: od_b0 must be > 0");
    if (!(n1 > 0)) throw std::domain_error("SwitchParams: n1 must be > 0");
    if (!(p_s >= 0 && p_s <= 1)) throw std::domain_error("SwitchParams: p_s must be in [0,1]");
    if (n0 < 0) throw std::domain_error("SwitchParams: n0 must be >= 0");
    if (!(t0 > 0 && t0 <= 1)) throw std::domain_error("SwitchParams: t0 must be in (0,1]");
    if (!(bins > 0)) throw std::domain_error("SwitchParams: bins must be > 0");
}

double blockaded_od(double n_t, const SwitchParams& s, Warnings* warnings) {
    s.validate();
    if (n_t < 0) throw std::domain_error("blockaded_od: N_t must be >= 0");
    if (n_t >= s.n1)
        warn(warnings, "blockaded_od: N_t >= N1 (" + std::to_string(n_t) + " >= " +
                           std::to_string(s.n1) + "), depletion law leaves its validity range");
    return s.od_b0 * (1.0 - n_t / s.n1);
}

double od_b0_estimate(double blockade_radius, double absorption_length) {
    if (!(blockade_radius > 0 && absorption_length > 0))
        throw std::domain_error("od_b0_estimate: inputs must be > 0");
    return 2.0 * blockade_radius / absorption_length;
}

double extinction_post_vs_nt(double n_t, const SwitchParams& s, Warnings* warnings) {
    if (!(n_t > 0))
        throw std::domain_error("extinction_post_vs_nt: N_t must be > 0 (0/0 at N_t = 0)");
    const double n_out = transmitted_mean(n_t, s.bins, s.t0);
    return n_t * std::exp(-blockaded_od(n_t, s, warnings)) / n_out;
}

double extinction_total_vs_nt(double n_t, const SwitchParams& s, Warnings* warnings) {
    if (!(n_t > 0))
        throw std::domain_error(
            "extinction_total_vs_nt: N_t must be > 0; at N_t = 0 the numerator is p_s*N0, "
            "see switch_numerator_at_zero");
    const double n_out = transmitted_mean(n_t, s.bins, s.t0);
    const double blocked = n_t * std::exp(-blockaded_od(n_t, s, warnings)) + s.n0;
    return ((1.0 - s.p_s) * n_out + s.p_s * blocked) / n_out;
}

double switch_numerator_at_zero(const SwitchParams& s) {
    s.validate();
    return s.p_s * s.n0;
}

void DecayParams::validate() const {
    if (!(tau_pop > 0)) throw std::domain_error("DecayParams: tau_pop must be > 0");
    if (gamma0 < 0) throw std::domain_error("DecayParams: gamma0 must be >= 0");
    if (k_rho < 0) throw std::domain_error("DecayParams: k_rho must be >= 0");
}

double blockade_decay(double t_d, double eps0, const DecayParams& d) {
    d.validate();
    if (t_d < 0) throw std::domain_error("blockade_decay: t_d must be >= 0");
    return 1.0 - (1.0 - eps0) * std::exp(-t_d / d.tau_pop);
}

double dephasing_rate(double rho, const DecayParams& d) {
    d.validate();
    if (rho < 0) throw std::domain_error("dephasing_rate: density must be >= 0");
    return d.gamma0 + d.k_rho * rho;
}

double retrieval_decay(double t_d, double n_r0, double rate) {
    if (t_d < 0) throw std::domain_error("retrieval_decay: t_d must be >= 0");
    return n_r0 * std::exp(-rate * t_d);
}

} // namespace switchsim
