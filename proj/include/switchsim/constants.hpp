#pragma once

#include <numbers>

// Fundamental constants (CODATA 2018), SI base units throughout.
// Every module in this library works in SI internally: lengths in m,
// angular frequencies in rad/s, energies in J, densities in 1/m^3.
// Presentation layers convert to um / MHz / uK for reports.

namespace switchsim {

struct PhysicalConstants {
    double hbar = 1.054571817e-34;        // J s
    double kB = 1.380649e-23;             // J/K
    double c = 2.99792458e8;              // m/s
    double eps0 = 8.8541878128e-12;       // F/m
    double a0 = 5.29177210903e-11;        // m, Bohr radius
    double e_charge = 1.602176634e-19;    // C
    double m_electron = 9.1093837015e-31; // kg
    double m_Rb87 = 86.909180527 * 1.66053906660e-27; // kg
    // Hartree energy, defined through hbar, m_e, a0 so the identity
    // E_h = hbar^2 / (m_e a0^2) holds to machine precision.
    double E_hartree = hbar * hbar / (m_electron * a0 * a0); // J

    constexpr static double pi = std::numbers::pi;
    constexpr static double two_pi = 2.0 * std::numbers::pi;
};

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Shared default instance; all fields are immutable in practice.
inline const PhysicalConstants& constants() {
    static const PhysicalConstants k{};
    return k;
}

} // namespace switchsim
