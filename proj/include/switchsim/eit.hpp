#pragma once

namespace switchsim {
namespace eit {

// Parameters of the empiric two-term transmission spectrum: a Lorentzian
// absorption line of depth OD plus a Gaussian transparency peak of height
// T0 and FWHM delta_t. All detunings/widths are angular (rad/s).
struct SpectrumParams {
    double od = 0;      // optical depth of the bare absorption line
    double gamma = 0;   // rad/s, linewidth of the absorption line
    double delta0 = 0;  // rad/s, center of the absorption line
    double delta1 = 0;  // rad/s, center of the transparency peak
    double t0 = 0;      // resonant transmission of the peak, in [0,1]
    double delta_t = 0; // rad/s, FWHM of the transparency peak

    void validate() const; // throws std::domain_error on violated invariants
};

// T(Delta_s) = exp(-OD / (1 + (2(Ds-D0)/Gamma)^2))
//            + T0 exp(-4 (Ds-D1)^2 ln2 / Dt^2).
// The raw two-term value is returned unclamped; it can marginally exceed 1
// near the wings, which is a property of the empiric model, not a bug.
double transmission(double delta_s, const SpectrumParams& p);

// FWHM of the EIT window: Delta_T = Omega_c^2 sqrt(ln2) / (Gamma sqrt(OD)).
double transparency_width(double rabi, double gamma, double od);

// Residual optical depth at the EIT resonance for dephasing rate gamma21:
// OD_EIT = OD * gamma21 Gamma / (gamma21 Gamma + Omega_c^2 / 2).
// One convention among several in the literature; kept in this single
// function so it can be swapped. Used for reporting only -- fitted spectra
// provide the OD_EIT values the models consume.
double resonant_od_with_dephasing(double od, double rabi, double gamma, double gamma21);

// v_g ~ Omega_c^2 l_a / Gamma (dephasing ignored).
double group_velocity(double rabi, double absorption_length, double gamma);

// v_g = sqrt(2 pi) sigma_z / t_delay, from the observed pulse delay.
// The two estimators are reported separately, never averaged.
double group_velocity_from_delay(double sigma_z, double t_delay);

// tau_c = 1.05 sqrt(8 OD) Gamma / Omega_c^2.
double correlation_time_prediction(double od, double gamma, double rabi);

} // namespace eit
} // namespace switchsim
