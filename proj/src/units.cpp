#include "switchsim/units.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>

#include "switchsim/constants.hpp"

namespace switchsim {

namespace {

struct UnitEntry {
    Dimension dim;
    double factor;
};

// Unit token -> (dimension, multiplier to SI base).
const std::map<std::string, UnitEntry>& unit_table() {
    static const std::map<std::string, UnitEntry> table = [] {
        const auto& k = constants();
        std::map<std::string, UnitEntry> t;
        t["m"] = {Dimension::length, 1.0};
        t["mm"] = {Dimension::length, 1e-3};
        t["um"] = {Dimension::length, 1e-6};
        t["nm"] = {Dimension::length, 1e-9};
        t["s"] = {Dimension::time, 1.0};
        t["ms"] = {Dimension::time, 1e-3};
        t["us"] = {Dimension::time, 1e-6};
        t["ns"] = {Dimension::time, 1e-9};
        t["K"] = {Dimension::temperature, 1.0};
        t["mK"] = {Dimension::temperature, 1e-3};
        t["uK"] = {Dimension::temperature, 1e-6};
        t["nK"] = {Dimension::temperature, 1e-9};
        t["W"] = {Dimension::power, 1.0};
        t["mW"] = {Dimension::power, 1e-3};
        t["uW"] = {Dimension::power, 1e-6};
        t["rad/s"] = {Dimension::angular_freq, 1.0};
        t["Hz"] = {Dimension::angular_freq, kTwoPi};
        t["kHz"] = {Dimension::angular_freq, kTwoPi * 1e3};
        t["MHz"] = {Dimension::angular_freq, kTwoPi * 1e6};
        t["GHz"] = {Dimension::angular_freq, kTwoPi * 1e9};
        t["1/s"] = {Dimension::rate, 1.0};
        t["s^-1"] = {Dimension::rate, 1.0};
        t["1/ms"] = {Dimension::rate, 1e3};
        t["ms^-1"] = {Dimension::rate, 1e3};
        t["1/us"] = {Dimension::rate, 1e6};
        t["us^-1"] = {Dimension::rate, 1e6};
        t["m^-3"] = {Dimension::density, 1.0};
        t["1/m^3"] = {Dimension::density, 1.0};
        t["cm^-3"] = {Dimension::density, 1e6};
        t["1/cm^3"] = {Dimension::density, 1e6};
        t["J*m^6"] = {Dimension::vdw_c6, 1.0};
        const double eh_a06 = k.E_hartree * std::pow(k.a0, 6.0);
        t["Eh*a0^6"] = {Dimension::vdw_c6, eh_a06};
        t["C*m^2/V"] = {Dimension::polarizability, 1.0};
        // atomic unit of polarizability as usually quoted: 4 pi eps0 a0^3
        const double au_pol = 4.0 * kPi * k.eps0 * std::pow(k.a0, 3.0);
        t["4pi*eps0*a0^3"] = {Dimension::polarizability, au_pol};
        t["au"] = {Dimension::polarizability, au_pol};
        return t;
    }();
    return table;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

} // namespace

const char* dimension_name(Dimension dim) {
    switch (dim) {
        case Dimension::dimensionless: return "dimensionless";
        case Dimension::length: return "length";
        case Dimension::time: return "time";
        case Dimension::temperature: return "temperature";
        case Dimension::power: return "power";
        case Dimension::angular_freq: return "angular frequency";
        case Dimension::rate: return "rate";
        case Dimension::density: return "density";
        case Dimension::vdw_c6: return "van-der-Waals C6";
        case Dimension::polarizability: return "polarizability";
    }
    return "?";
}

double parse_quantity(const std::string& text, Dimension dim) {
    const std::string s = trim(text);
    if (s.empty())
        throw std::invalid_argument("empty quantity");

    const char* begin = s.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin)
        throw std::invalid_argument("quantity '" + s + "' has no numeric value");

    const std::string unit = trim(std::string(end));
    if (unit.empty()) {
        if (dim == Dimension::dimensionless) return value;
        throw std::invalid_argument("quantity '" + s + "' is missing a " +
                                    std::string(dimension_name(dim)) + " unit suffix");
    }
    if (dim == Dimension::dimensionless)
        throw std::invalid_argument("quantity '" + s + "' must be dimensionless, got unit '" +
                                    unit + "'");

    const auto& table = unit_table();
    const auto it = table.find(unit);
    if (it == table.end())
        throw std::invalid_argument("unknown unit '" + unit + "' in '" + s + "'");
    if (it->second.dim != dim)
        throw std::invalid_argument("unit '" + unit + "' is a " +
                                    std::string(dimension_name(it->second.dim)) +
                                    " unit, expected " + dimension_name(dim));
    return value * it->second.factor;
}

} // namespace switchsim
