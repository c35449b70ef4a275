#include "switchsim/params.hpp"

#include <cmath>
#include <stdexcept>

#include "switchsim/constants.hpp"
#include "switchsim/eit.hpp"
#include "switchsim/propagation.hpp"

namespace switchsim {

CloudGeometry cloud_geometry(const ExperimentConfig& cfg) {
    const auto& k = constants();
    if (!(cfg.temperature > 0))
        throw std::domain_error("cloud_geometry: temperature must be > 0");
    if (!(cfg.trap_freq_x > 0 && cfg.trap_freq_y > 0 && cfg.trap_freq_z > 0))
        throw std::domain_error("cloud_geometry: trap frequencies must be > 0");

    CloudGeometry g;
    const double kt = k.kB * cfg.temperature;
    g.sigma_x = std::sqrt(kt / (k.m_Rb87 * cfg.trap_freq_x * cfg.trap_freq_x));
    g.sigma_y = std::sqrt(kt / (k.m_Rb87 * cfg.trap_freq_y * cfg.trap_freq_y));
    g.sigma_z = std::sqrt(kt / (k.m_Rb87 * cfg.trap_freq_z * cfg.trap_freq_z));
    g.peak_density = cfg.atom_number /
                     (std::pow(kTwoPi, 1.5) * g.sigma_x * g.sigma_y * g.sigma_z);
    return g;
}

double beam_field_amplitude(double power, double waist) {
    const auto& k = constants();
    if (!(waist > 0))
        throw std::domain_error("beam_field_amplitude: waist must be > 0");
    if (power < 0)
        throw std::domain_error("beam_field_amplitude: power must be >= 0");
    return std::sqrt(4.0 * power / (kPi * waist * waist * k.c * k.eps0));
}

std::pair<double, double> rydberg_dipole_elements(double n, std::vector<std::string>* warnings) {
    const auto& k = constants();
    if (!(n > 0))
        throw std::domain_error("rydberg_dipole_elements: n must be > 0");
    if (warnings && (n < 50 || n > 150))
        warnings->push_back("rydberg_dipole_elements: radial-integral formula is used outside "
                            "n in [50,150]; treat the result as an extrapolation");
    const double radial = 0.014 * std::pow(50.0 / n, 1.5) * k.a0; // m
    const double d_gate = k.e_charge * radial / 3.0;
    const double d_target = k.e_charge * radial * std::sqrt(2.0) / 3.0;
    return {d_gate, d_target};
}

double rabi_frequency(double dipole, double e_field) {
    if (!(dipole > 0))
        throw std::domain_error("rabi_frequency: dipole must be > 0");
    if (e_field < 0)
        throw std::domain_error("rabi_frequency: field must be >= 0");
    return dipole * e_field / constants().hbar;
}

double blockade_radius(double c6, double gamma, double rabi) {
    if (!(rabi > 0))
        throw std::domain_error("blockade_radius: Rabi frequency must be > 0 (radius diverges)");
    const double ratio = std::abs(2.0 * c6 * gamma / (constants().hbar * rabi * rabi));
    return std::pow(ratio, 1.0 / 6.0);
}

double absorption_cross_section(double branching, double wavelength) {
    if (!(branching > 0 && branching <= 1))
        throw std::domain_error("absorption_cross_section: branching ratio must be in (0,1]");
    if (!(wavelength > 0))
        throw std::domain_error("absorption_cross_section: wavelength must be > 0");
    return 3.0 * branching * wavelength * wavelength / kTwoPi;
}

double absorption_length(double density, double branching, double wavelength) {
    if (!(density > 0))
        throw std::domain_error("absorption_length: density must be > 0");
    return 1.0 / (density * absorption_cross_section(branching, wavelength));
}

std::pair<double, double> dipole_potential(double alpha_pol, double e_field, double duty_factor) {
    if (duty_factor < 0 || duty_factor > 1)
        throw std::domain_error("dipole_potential: duty factor must be in [0,1]");
    const double v0 = -alpha_pol * e_field * e_field / 4.0;
    return {v0, duty_factor * v0};
}

DerivedQuantities derive_all(const ExperimentConfig& cfg, std::vector<std::string>* warnings) {
    DerivedQuantities d;
    d.cloud = cloud_geometry(cfg);

    d.e_field_gate = beam_field_amplitude(cfg.control_power_gate, cfg.control_waist);
    d.e_field_target = beam_field_amplitude(cfg.control_power_target, cfg.control_waist);

    const auto [dg, dt] = rydberg_dipole_elements(cfg.principal_n, warnings);
    d.dipole_gate = dg;
    d.dipole_target = dt;
    d.rabi_gate = rabi_frequency(dg, d.e_field_gate);
    d.rabi_target = rabi_frequency(dt, d.e_field_target);

    d.blockade_radius_gate = blockade_radius(cfg.c6, cfg.gamma, d.rabi_gate);
    d.blockade_radius_target = blockade_radius(cfg.c6, cfg.gamma, d.rabi_target);

    d.cross_section_target = absorption_cross_section(cfg.branching_target, cfg.signal_wavelength);
    // homogeneous-medium approximation: density rho_p/2 over length sqrt(2 pi) sigma_z
    d.absorption_length = absorption_length(0.5 * d.cloud.peak_density, cfg.branching_target,
                                            cfg.signal_wavelength);
    d.medium_length = std::sqrt(kTwoPi) * d.cloud.sigma_z;
    d.od_axis_target = d.medium_length / d.absorption_length;

    d.group_velocity_formula = eit::group_velocity(d.rabi_target, d.absorption_length, cfg.gamma);
    d.group_velocity_delay = eit::group_velocity_from_delay(d.cloud.sigma_z, cfg.target_delay);

    d.transparency_width_gate = eit::transparency_width(d.rabi_gate, cfg.gamma, cfg.od_gate);
    d.transparency_width_target = eit::transparency_width(d.rabi_target, cfg.gamma, cfg.od_target);

    d.od_eit_pred_gate =
        eit::resonant_od_with_dephasing(cfg.od_gate, d.rabi_gate, cfg.gamma, cfg.gamma21);
    d.od_eit_pred_target =
        eit::resonant_od_with_dephasing(cfg.od_target, d.rabi_target, cfg.gamma, cfg.gamma21);

    d.correlation_time_pred =
        eit::correlation_time_prediction(d.od_axis_target, cfg.gamma, d.rabi_target);
    d.correlation_time_pred_od_t =
        eit::correlation_time_prediction(cfg.od_target, cfg.gamma, d.rabi_target);
    d.correlation_time_naive = d.blockade_radius_target / d.group_velocity_delay;

    d.bins_estimate_gate = bin_count_estimate(cfg.pulse_duration_gate, cfg.correlation_time);
    d.bins_estimate_target = bin_count_estimate(cfg.pulse_duration_target, cfg.correlation_time);

    const auto [v0, v0_avg] =
        dipole_potential(cfg.alpha_pol, d.e_field_target, cfg.control_duty_factor());
    d.dipole_potential = v0;
    d.dipole_potential_avg = v0_avg;
    return d;
}

} // namespace switchsim
