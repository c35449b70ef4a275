#include "switchsim/config.hpp"

#include <fstream>
#include <sstream>

namespace switchsim {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

KeyValueFile KeyValueFile::parse_string(const std::string& text, const std::string& origin) {
    KeyValueFile kv;
    kv.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip comments, but not inside values ('#' never appears in units)
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (kv.entries_.count(full))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + full + "'");
        kv.entries_[full] = value;
    }
    return kv;
}

const std::string& KeyValueFile::raw(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end())
        throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

std::vector<std::string> KeyValueFile::keys() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [k, v] : entries_) out.push_back(k);
    return out;
}

double ExperimentConfig::control_duty_factor() const {
    return (control_on_full + 0.5 * control_on_half) / cycle_time;
}

namespace {

struct FieldSpec {
    const char* key;
    Dimension dim;
    double ExperimentConfig::*member;
};

const FieldSpec kFields[] = {
    {"atoms.atom_number", Dimension::dimensionless, &ExperimentConfig::atom_number},
    {"atoms.temperature", Dimension::temperature, &ExperimentConfig::temperature},
    {"atoms.trap_freq_x", Dimension::angular_freq, &ExperimentConfig::trap_freq_x},
    {"atoms.trap_freq_y", Dimension::angular_freq, &ExperimentConfig::trap_freq_y},
    {"atoms.trap_freq_z", Dimension::angular_freq, &ExperimentConfig::trap_freq_z},
    {"beams.signal_wavelength", Dimension::length, &ExperimentConfig::signal_wavelength},
    {"beams.control_wavelength", Dimension::length, &ExperimentConfig::control_wavelength},
    {"beams.signal_waist", Dimension::length, &ExperimentConfig::signal_waist},
    {"beams.control_waist", Dimension::length, &ExperimentConfig::control_waist},
    {"beams.control_power_gate", Dimension::power, &ExperimentConfig::control_power_gate},
    {"beams.control_power_target", Dimension::power, &ExperimentConfig::control_power_target},
    {"transitions.c6", Dimension::vdw_c6, &ExperimentConfig::c6},
    {"transitions.gamma", Dimension::angular_freq, &ExperimentConfig::gamma},
    {"transitions.branching_gate", Dimension::dimensionless, &ExperimentConfig::branching_gate},
    {"transitions.branching_target", Dimension::dimensionless, &ExperimentConfig::branching_target},
    {"transitions.alpha_pol", Dimension::polarizability, &ExperimentConfig::alpha_pol},
    {"transitions.principal_n", Dimension::dimensionless, &ExperimentConfig::principal_n},
    {"medium.od_gate", Dimension::dimensionless, &ExperimentConfig::od_gate},
    {"medium.od_target", Dimension::dimensionless, &ExperimentConfig::od_target},
    {"timing.cycle_time", Dimension::time, &ExperimentConfig::cycle_time},
    {"timing.dark_time", Dimension::time, &ExperimentConfig::dark_time},
    {"timing.pulse_duration_gate", Dimension::time, &ExperimentConfig::pulse_duration_gate},
    {"timing.pulse_duration_target", Dimension::time, &ExperimentConfig::pulse_duration_target},
    {"timing.target_delay", Dimension::time, &ExperimentConfig::target_delay},
    {"timing.control_on_full", Dimension::time, &ExperimentConfig::control_on_full},
    {"timing.control_on_half", Dimension::time, &ExperimentConfig::control_on_half},
    {"detection.gamma21", Dimension::rate, &ExperimentConfig::gamma21},
    {"detection.detection_efficiency", Dimension::dimensionless, &ExperimentConfig::detection_efficiency},
    {"detection.correlation_time", Dimension::time, &ExperimentConfig::correlation_time},
};

} // namespace

ExperimentConfig ExperimentConfig::from_file(const KeyValueFile& kv) {
    ExperimentConfig cfg;
    std::vector<std::string> problems;
    for (const auto& f : kFields) {
        if (!kv.has(f.key)) {
            problems.push_back(std::string("missing required field '") + f.key + "'");
            continue;
        }
        try {
            cfg.*(f.member) = parse_quantity(kv.raw(f.key), f.dim);
        } catch (const std::invalid_argument& e) {
            problems.push_back(std::string("field '") + f.key + "': " + e.what());
        }
    }
    if (!problems.empty()) {
        std::string msg = "config errors:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw ConfigError(msg);
    }
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    std::vector<std::string> problems;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0)) problems.push_back(std::string(name) + " must be > 0");
    };
    auto unit_interval = [&](double v, const char* name) {
        if (!(v > 0 && v <= 1)) problems.push_back(std::string(name) + " must be in (0,1]");
    };
    positive(atom_number, "atoms.atom_number");
    positive(temperature, "atoms.temperature");
    positive(trap_freq_x, "atoms.trap_freq_x");
    positive(trap_freq_y, "atoms.trap_freq_y");
    positive(trap_freq_z, "atoms.trap_freq_z");
    positive(signal_wavelength, "beams.signal_wavelength");
    positive(control_wavelength, "beams.control_wavelength");
    positive(signal_waist, "beams.signal_waist");
    positive(control_waist, "beams.control_waist");
    if (control_power_gate < 0) problems.push_back("beams.control_power_gate must be >= 0");
    if (control_power_target < 0) problems.push_back("beams.control_power_target must be >= 0");
    positive(gamma, "transitions.gamma");
    unit_interval(branching_gate, "transitions.branching_gate");
    unit_interval(branching_target, "transitions.branching_target");
    positive(principal_n, "transitions.principal_n");
    positive(od_gate, "medium.od_gate");
    positive(od_target, "medium.od_target");
    positive(cycle_time, "timing.cycle_time");
    positive(pulse_duration_gate, "timing.pulse_duration_gate");
    positive(pulse_duration_target, "timing.pulse_duration_target");
    positive(target_delay, "timing.target_delay");
    if (control_on_full < 0 || control_on_half < 0)
        problems.push_back("timing.control_on_* must be >= 0");
    if (gamma21 < 0) problems.push_back("detection.gamma21 must be >= 0");
    unit_interval(detection_efficiency, "detection.detection_efficiency");
    positive(correlation_time, "detection.correlation_time");

    if (!problems.empty()) {
        std::string msg = "config validation failed:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw ConfigError(msg);
    }
}

} // namespace switchsim
