#include "switchsim/report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "switchsim/constants.hpp"

namespace switchsim {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

struct ReportRow {
    std::string key;
    double value;       // presentation units
    std::string unit;
    double si_value;    // SI, for the JSON record
    std::string ref_key; // lookup into preset.reference (presentation scale match)
    double ref_scale;    // reference[ref_key] * ref_scale -> presentation units
};

std::vector<ReportRow> report_rows(const Preset& preset, const DerivedQuantities& d) {
    const double mhz = kTwoPi * 1e6;
    const double kB = constants().kB;
    const auto& c = preset.config;
    std::vector<ReportRow> rows;
    auto add = [&](const std::string& key, double value, const std::string& unit, double si,
                   const std::string& ref = "", double scale = 1.0) {
        rows.push_back({key, value, unit, si, ref, scale});
    };
    add("sigma_x", d.cloud.sigma_x * 1e6, "um", d.cloud.sigma_x, "sigma_x", 1e6);
    add("sigma_y", d.cloud.sigma_y * 1e6, "um", d.cloud.sigma_y, "sigma_y", 1e6);
    add("sigma_z", d.cloud.sigma_z * 1e6, "um", d.cloud.sigma_z, "sigma_z", 1e6);
    add("peak_density", d.cloud.peak_density * 1e-6, "cm^-3", d.cloud.peak_density,
        "peak_density", 1e-6);
    add("e_field_gate", d.e_field_gate * 1e-6, "MV/m", d.e_field_gate, "e_field_gate", 1e-6);
    add("e_field_target", d.e_field_target * 1e-6, "MV/m", d.e_field_target, "e_field_target",
        1e-6);
    const double ea0 = constants().e_charge * constants().a0;
    add("dipole_gate", d.dipole_gate / ea0, "e*a0", d.dipole_gate, "dipole_gate_ea0");
    add("dipole_target", d.dipole_target / ea0, "e*a0", d.dipole_target, "dipole_target_ea0");
    add("rabi_gate", d.rabi_gate / mhz, "MHz (/2pi)", d.rabi_gate, "rabi_gate", 1.0 / mhz);
    add("rabi_target", d.rabi_target / mhz, "MHz (/2pi)", d.rabi_target, "rabi_target",
        1.0 / mhz);
    add("blockade_radius_gate", d.blockade_radius_gate * 1e6, "um", d.blockade_radius_gate,
        "blockade_radius_gate", 1e6);
    add("blockade_radius_target", d.blockade_radius_target * 1e6, "um",
        d.blockade_radius_target, "blockade_radius_target", 1e6);
    add("cross_section_target", d.cross_section_target, "m^2", d.cross_section_target);
    add("absorption_length", d.absorption_length * 1e6, "um", d.absorption_length,
        "absorption_length", 1e6);
    add("medium_length", d.medium_length * 1e6, "um", d.medium_length);
    add("od_axis_target", d.od_axis_target, "", d.od_axis_target);
    add("od_gate (input)", c.od_gate, "", c.od_gate);
    add("od_target (input)", c.od_target, "", c.od_target);
    add("transparency_width_gate", d.transparency_width_gate / mhz, "MHz (FWHM/2pi)",
        d.transparency_width_gate, "transparency_width_gate", 1.0 / mhz);
    add("transparency_width_target", d.transparency_width_target / mhz, "MHz (FWHM/2pi)",
        d.transparency_width_target, "transparency_width_target", 1.0 / mhz);
    add("od_eit_pred_gate", d.od_eit_pred_gate, "", d.od_eit_pred_gate, "od_eit_pred_gate");
    add("od_eit_pred_target", d.od_eit_pred_target, "", d.od_eit_pred_target,
        "od_eit_pred_target");
    add("group_velocity_formula", d.group_velocity_formula * 1e-3, "km/s",
        d.group_velocity_formula, "group_velocity_formula", 1e-3);
    add("group_velocity_delay", d.group_velocity_delay * 1e-3, "km/s", d.group_velocity_delay,
        "group_velocity_delay", 1e-3);
    add("correlation_time_pred", d.correlation_time_pred * 1e6, "us (at od_axis)",
        d.correlation_time_pred, "correlation_time_pred", 1e6);
    add("correlation_time_pred_od_t", d.correlation_time_pred_od_t * 1e6,
        "us (at od_target)", d.correlation_time_pred_od_t);
    add("correlation_time_naive", d.correlation_time_naive * 1e6, "us (r_b/v_g)",
        d.correlation_time_naive);
    add("bins_estimate_gate", d.bins_estimate_gate, "(t_p/tau_c)", d.bins_estimate_gate);
    add("bins_estimate_target", d.bins_estimate_target, "(t_p/tau_c)", d.bins_estimate_target);
    add("dipole_potential", d.dipole_potential / kB * 1e6, "kB*uK", d.dipole_potential,
        "dipole_potential_uK");
    add("dipole_potential_avg", d.dipole_potential_avg / kB * 1e6, "kB*uK",
        d.dipole_potential_avg, "dipole_potential_avg_uK");
    return rows;
}

} // namespace

std::string derive_report_text(const Preset& preset, const DerivedQuantities& d,
                               const std::vector<std::string>& warnings) {
    std::ostringstream os;
    os << "# derived quantities, preset '" << preset.name << "'\n";
    os << "# columns: quantity, value, unit, reference, rel.dev\n";
    char line[256];
    for (const auto& row : report_rows(preset, d)) {
        const auto it = preset.reference.find(row.ref_key);
        if (!row.ref_key.empty() && it != preset.reference.end()) {
            const double ref = it->second * row.ref_scale;
            const double dev = (row.value - ref) / ref;
            std::snprintf(line, sizeof line, "%-28s %14.6g  %-14s %14.6g  %+6.1f%%\n",
                          row.key.c_str(), row.value, row.unit.c_str(), ref, dev * 100.0);
        } else {
            std::snprintf(line, sizeof line, "%-28s %14.6g  %-14s %14s\n", row.key.c_str(),
                          row.value, row.unit.c_str(), "-");
        }
        os << line;
    }
    for (const auto& w : warnings) os << "# warning: " << w << "\n";
    return os.str();
}

std::string derive_report_json(const Preset& preset, const DerivedQuantities& d,
                               const std::vector<std::string>& warnings) {
    json j;
    j["preset"] = preset.name;
    json quantities = json::object();
    for (const auto& row : report_rows(preset, d)) {
        json q;
        q["value"] = row.value;
        q["unit"] = row.unit;
        q["si_value"] = row.si_value;
        const auto it = preset.reference.find(row.ref_key);
        if (!row.ref_key.empty() && it != preset.reference.end()) {
            q["reference"] = it->second * row.ref_scale;
            q["rel_dev"] = (row.value - it->second * row.ref_scale) / (it->second * row.ref_scale);
        }
        quantities[row.key] = q;
    }
    j["quantities"] = quantities;
    j["warnings"] = warnings;
    return j.dump(2) + "\n";
}

std::string Table::to_text() const {
    std::ostringstream os;
    for (const auto& c : comments) os << "# " << c << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        os << (i ? "\t" : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "\t" : "") << format_double(row[i]);
        os << "\n";
    }
    return os.str();
}

std::string RunManifest::to_json(bool with_timestamp) const {
    json j;
    j["tool"] = "switchsim";
    j["version"] = "1.0.0";
    j["subcommand"] = subcommand;
    j["preset"] = preset;
    if (!config_path.empty()) j["config"] = config_path;
    j["seed"] = seed;
    j["outputs"] = outputs;
    if (!extra.empty()) j["summary"] = extra;
    if (with_timestamp) {
        char buf[64];
        const std::time_t now = std::time(nullptr);
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        j["timestamp"] = buf;
    }
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

} // namespace switchsim
