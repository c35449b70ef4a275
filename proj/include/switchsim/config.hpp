#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "switchsim/units.hpp"

namespace switchsim {

// Raised for malformed files, missing fields, bad units, or invariant
// violations. The message lists every offending field, one per line.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Flat "[section]" + "key = value" file. Keys are addressed as
// "section.key". Lines starting with '#' are comments.
class KeyValueFile {
public:
    static KeyValueFile parse_file(const std::string& path);
    static KeyValueFile parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    // Raw text of a value, e.g. "0.43 uK".
    const std::string& raw(const std::string& key) const;
    std::vector<std::string> keys() const;

private:
    std::map<std::string, std::string> entries_;
    std::string origin_;
};

// All raw physical inputs of one experimental configuration. Units are SI
// base units (angular frequencies in rad/s); the config file may use any
// suffix of the right dimension.
struct ExperimentConfig {
    // [atoms]
    double atom_number = 0;        // count
    double temperature = 0;        // K
    double trap_freq_x = 0;        // rad/s
    double trap_freq_y = 0;        // rad/s
    double trap_freq_z = 0;        // rad/s

    // [beams]
    double signal_wavelength = 0;  // m
    double control_wavelength = 0; // m
    double signal_waist = 0;       // m
    double control_waist = 0;      // m
    double control_power_gate = 0;   // W
    double control_power_target = 0; // W

    // [transitions]
    double c6 = 0;                 // J m^6, negative for the nS state used here
    double gamma = 0;              // rad/s, decay rate of the intermediate state
    double branching_gate = 0;     // dimensionless in (0,1]
    double branching_target = 0;   // dimensionless in (0,1]
    double alpha_pol = 0;          // C m^2/V, signed
    double principal_n = 0;        // principal quantum number of the Rydberg state

    // [medium] measured optical depths (transverse-averaged, inputs not outputs)
    double od_gate = 0;            // dimensionless
    double od_target = 0;          // dimensionless

    // [timing]
    double cycle_time = 0;         // s
    double dark_time = 0;          // s
    double pulse_duration_gate = 0;   // s
    double pulse_duration_target = 0; // s
    double target_delay = 0;       // s, observed pulse delay of the target
    double control_on_full = 0;    // s per cycle at full power
    double control_on_half = 0;    // s per cycle at half power

    // [detection]
    double gamma21 = 0;            // 1/s, spin-wave dephasing rate
    double detection_efficiency = 0; // dimensionless in (0,1]
    double correlation_time = 0;   // s, measured rms correlation time

    // Duty factor of the control light over one cycle (half power counts
    // with weight 1/2 because the potential is proportional to intensity).
    double control_duty_factor() const;

    // Throws ConfigError listing every violated invariant.
    void validate() const;

    static ExperimentConfig from_file(const KeyValueFile& kv);
};

} // namespace switchsim
