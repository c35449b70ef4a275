#pragma once

#include <functional>
#include <string>
#include <vector>

namespace switchsim {

using Warnings = std::vector<std::string>;

// Gate-pulse storage chain: binning parameters plus the storage efficiency
// eta_sb (excluding blockade and linear absorption). od / od_eit are the
// depth products alpha L_p and alpha1 L_p over the pulse length.
struct StorageParams {
    double eta_sb = 0; // in [0,1]
    double bins = 0;   // b > 0, continuous
    double od = 0;     // alpha * L_p
    double od_eit = 0; // alpha1 * L_p

    void validate() const;
};

enum class StorageMode { full, rapid };

// Mean number of excitations in the medium immediately before the control
// switch-off, for N_in incoming photons.
//  rapid: N_b = b (1-e^{-OD_EIT})/OD_EIT (1-e^{-mu0})
//  full:  N_b = b [ (1-e^{-OD_EIT})/OD_EIT (1-e^{-mu0}) - 1
//                   + (mu0-mu_L)/OD + (E1(mu_L)-E1(mu0))/OD ],
// with mu0 = N_in/b and mu_L = mu0 e^{-OD}.
double stored_mean_before_switchoff(double n_in, const StorageParams& p, StorageMode mode);

// eps(N_g) = 1 - eta_sb N_b(N_g). Valid while eta_sb N_b <= 1; outside that
// regime the value is clamped to 0 and a warning is recorded.
double extinction_vs_ng(double n_g, const StorageParams& p, StorageMode mode,
                        Warnings* warnings = nullptr);

// beta = eta_sb (1-e^{-OD_EIT})/OD_EIT, the |slope| of eps(N_g) at N_g -> 0.
double initial_slope_beta(const StorageParams& p);

// Heralding: write-read efficiency, detection efficiency, and the measured
// background herald probability at N_g = 0 (entering additively).
struct HeraldParams {
    double eta_wr = 0;
    double eta_det = 0;
    double p_h0 = 0;

    void validate() const;
};

// p_h(N_g) = eta_wr eta_det N_b(N_g) + p_h0. The herald fit uses the rapid
// N_b by default, as the published fit does.
double herald_probability(double n_g, const HeraldParams& h, const StorageParams& p,
                          StorageMode mode = StorageMode::rapid);

// eps_post(N_g) = ((1-q) N_trans_ideal_post + q N_trans_total(N_g)) / N_post0
// with q = p_h(0)/p_h(N_g). eps_ideal = N_trans_ideal_post / N_post0.
// total_model maps N_g to the total-ensemble transmitted photon number.
double postselected_extinction_vs_ng(double n_g, double eps_ideal, double n_trans_post0,
                                     const HeraldParams& h, const StorageParams& p,
                                     const std::function<double(double)>& total_model,
                                     StorageMode mode = StorageMode::rapid);

// Target-pulse switch parameters.
struct SwitchParams {
    double od_b0 = 0; // blockaded optical depth at zero depletion
    double n1 = 0;    // depletion scale, photons
    double p_s = 0;   // probability that >= 1 gate excitation was stored
    double n0 = 0;    // background photons in the target window per stored cycle
    double t0 = 0;    // resonant transmission e^{-OD_EIT}
    double bins = 0;  // b of the target pulse

    void validate() const;
};

// OD_b(N_t) = OD_b0 (1 - N_t/N1); linear density-depletion law. For
// N_t >= N1 the (unphysical, negative) value is still returned with a
// warning so fit scans can traverse the region.
double blockaded_od(double n_t, const SwitchParams& s, Warnings* warnings = nullptr);

// Coarse geometric estimate OD_b0 ~ 2 r_b / l_a.
double od_b0_estimate(double blockade_radius, double absorption_length);

// eps_post(N_t) = N_t e^{-OD_b(N_t)} / N_out(N_t), N_out from the
// rapid-blockade transmitted mean. N_t = 0 is a 0/0 and rejected.
double extinction_post_vs_nt(double n_t, const SwitchParams& s, Warnings* warnings = nullptr);

// eps(N_t) = ((1-p_s) N_out + p_s (N_t e^{-OD_b} + N0)) / N_out.
// At N_t = 0 the numerator degenerates to p_s N0 and the ratio is
// undefined; use switch_numerator_at_zero for that case.
double extinction_total_vs_nt(double n_t, const SwitchParams& s, Warnings* warnings = nullptr);
double switch_numerator_at_zero(const SwitchParams& s); // p_s * N0

// Population decay of the blockade and density-dependent dephasing.
struct DecayParams {
    double tau_pop = 0; // s
    double gamma0 = 0;  // 1/s, zero-density dephasing rate
    double k_rho = 0;   // (1/s) per (1/m^3)

    void validate() const;
};

// eps(t_d) = 1 - (1 - eps0) e^{-t_d/tau_pop}: the blockade depth decays,
// the extinction relaxes to 1.
double blockade_decay(double t_d, double eps0, const DecayParams& d);

// gamma21(rho) = gamma0 + k_rho rho.
double dephasing_rate(double rho, const DecayParams& d);

// N_r(t_d) = N_r0 e^{-rate t_d}.
double retrieval_decay(double t_d, double n_r0, double rate);

} // namespace switchsim
