#pragma once

#include <utility>

#include "switchsim/config.hpp"

namespace switchsim {

// Thermal-cloud rms radii and peak density.
struct CloudGeometry {
    double sigma_x = 0, sigma_y = 0, sigma_z = 0; // m
    double peak_density = 0;                      // 1/m^3
};

// Everything computed from an ExperimentConfig. SI base units; see the
// report layer for um/MHz/uK presentation.
struct DerivedQuantities {
    CloudGeometry cloud;
    double e_field_gate = 0;        // V/m, control-beam peak field, gate power
    double e_field_target = 0;      // V/m
    double dipole_gate = 0;         // C m, control-transition matrix element
    double dipole_target = 0;       // C m
    double rabi_gate = 0;           // rad/s
    double rabi_target = 0;         // rad/s
    double blockade_radius_gate = 0;   // m
    double blockade_radius_target = 0; // m
    double cross_section_target = 0;   // m^2, signal absorption cross section
    double absorption_length = 0;      // m, target transition, density rho_p/2
    double medium_length = 0;          // m, sqrt(2 pi) sigma_z
    double od_axis_target = 0;         // medium_length / absorption_length
    double group_velocity_formula = 0; // m/s, Omega_c^2 l_a / Gamma
    double group_velocity_delay = 0;   // m/s, sqrt(2 pi) sigma_z / t_delay
    double transparency_width_gate = 0;   // rad/s (FWHM)
    double transparency_width_target = 0; // rad/s
    double od_eit_pred_gate = 0;    // resonant OD with dephasing (model value)
    double od_eit_pred_target = 0;
    double correlation_time_pred = 0;      // s, at the on-axis optical depth
    double correlation_time_pred_od_t = 0; // s, same formula at the measured od_target
    double correlation_time_naive = 0;     // s, r_b / v_g ballpark
    double bins_estimate_gate = 0;     // t_p,gate / tau_c
    double bins_estimate_target = 0;   // t_p,target / tau_c
    double dipole_potential = 0;       // J, V0 at target control power
    double dipole_potential_avg = 0;   // J, cycle-averaged <V0>
};

// sigma_i = sqrt(kB T / (m omega_i^2)), rho_p = N / ((2 pi)^{3/2} sx sy sz).
CloudGeometry cloud_geometry(const ExperimentConfig& cfg);

// Peak field of a Gaussian beam: E0 = sqrt(4 P / (pi w^2 c eps0)).
// Equivalent to I0 = 2P/(pi w^2), E0 = sqrt(2 I0 / (c eps0)).
double beam_field_amplitude(double power, double waist);

// Control-transition dipole matrix elements from the 5p->ns radial integral
// <r> = 0.014 (50/n)^{3/2} a0; angular factors 1/3 (gate) and sqrt(2)/3
// (target). Valid around n ~ 100; callers may pass a warning sink to be
// told when n leaves [50, 150].
std::pair<double, double> rydberg_dipole_elements(double n,
                                                  std::vector<std::string>* warnings = nullptr);

// Omega_c = d E0 / hbar.
double rabi_frequency(double dipole, double e_field);

// r_b = |2 C6 Gamma / (hbar Omega_c^2)|^{1/6}.
double blockade_radius(double c6, double gamma, double rabi);

// sigma = 3 xi lambda^2 / (2 pi), l_a = 1 / (rho sigma).
double absorption_cross_section(double branching, double wavelength);
double absorption_length(double density, double branching, double wavelength);

// V0 = -alpha E0^2 / 4 and its duty-cycle average.
std::pair<double, double> dipole_potential(double alpha_pol, double e_field, double duty_factor);

// Full derivation chain for one config.
DerivedQuantities derive_all(const ExperimentConfig& cfg,
                             std::vector<std::string>* warnings = nullptr);

} // namespace switchsim
