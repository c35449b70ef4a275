#pragma once

#include <string>
#include <vector>

#include "switchsim/params.hpp"
#include "switchsim/preset.hpp"

namespace switchsim {

// Formatting helpers shared by the CLI. All output is deterministic:
// fixed precision, no locale, timestamps only in run manifests.

// value with shortest round-trip-ish representation (%.12g)
std::string format_double(double v);

// Derived-parameter report: aligned key/value table in presentation units
// with the preset's reference values and relative deviations beside the
// computed chain.
std::string derive_report_text(const Preset& preset, const DerivedQuantities& d,
                               const std::vector<std::string>& warnings);
std::string derive_report_json(const Preset& preset, const DerivedQuantities& d,
                               const std::vector<std::string>& warnings);

// Delimited table: '#'-prefixed provenance block, one header row, then
// tab-separated rows.
struct Table {
    std::vector<std::string> comments; // without leading '#'
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string to_text() const;
};

// Run manifest emitted alongside every CLI output file.
struct RunManifest {
    std::string subcommand;
    std::string preset;
    std::string config_path;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    std::string extra; // subcommand-specific summary, free form

    std::string to_json(bool with_timestamp = true) const;
};

void write_file(const std::string& path, const std::string& content);

} // namespace switchsim
