#pragma once

#include <string>

namespace switchsim {

// Dimension tags for config fields. Each config key declares the dimension
// it expects; the parser accepts any unit suffix of that dimension and
// converts to the SI-base value (angular frequencies in rad/s).
enum class Dimension {
    dimensionless,
    length,        // m
    time,          // s
    temperature,   // K
    power,         // W
    angular_freq,  // rad/s; plain-frequency suffixes (Hz, MHz, ...) are
                   // interpreted as nu = omega/2pi and multiplied by 2pi
    rate,          // 1/s
    density,       // 1/m^3
    vdw_c6,        // J m^6; also accepts Eh*a0^6
    polarizability // C m^2/V; also accepts 4pi*eps0*a0^3 ("au")
};

// Parses "value [unit]" (e.g. "0.43 uK", "-3.9e23 Eh*a0^6", "136 Hz").
// A dimensionless quantity must carry no unit. Throws std::invalid_argument
// with a message naming the offending token on unknown or mismatched units.
double parse_quantity(const std::string& text, Dimension dim);

const char* dimension_name(Dimension dim);

} // namespace switchsim
