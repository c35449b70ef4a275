#include "switchsim/preset.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "switchsim/constants.hpp"

namespace switchsim {

const std::string& paper2014_config_text() {
    static const std::string text = R"(# switchsim preset: paper-2014
# Reference operating point of the single-photon Rydberg-blockade switch.
# Units: any suffix of the right dimension is accepted; frequencies given
# in Hz/MHz are ordinary frequencies (omega / 2pi).

[atoms]
atom_number = 2.2e5
temperature = 0.43 uK
trap_freq_x = 136 Hz
trap_freq_y = 37 Hz
trap_freq_z = 37 Hz

[beams]
signal_wavelength = 795 nm
control_wavelength = 473.9 nm
signal_waist = 8 um
control_waist = 12 um
control_power_gate = 16 mW
control_power_target = 32 mW

[transitions]
c6 = -3.9e23 Eh*a0^6
gamma = 5.75 MHz
branching_gate = 0.08333333333333333
branching_target = 0.5
alpha_pol = -163 4pi*eps0*a0^3
principal_n = 100

[medium]
od_gate = 3.5
od_target = 10

[timing]
cycle_time = 100 us
dark_time = 0.15 us
pulse_duration_gate = 0.2 us
pulse_duration_target = 0.4 us
target_delay = 0.25 us
control_on_full = 1.5 us
control_on_half = 0.6 us

[detection]
gamma21 = 1.1 us^-1
detection_efficiency = 0.27
correlation_time = 0.23 us
)";
    return text;
}

namespace {

Preset build_paper2014() {
    Preset p;
    p.name = "paper-2014";
    p.config = ExperimentConfig::from_file(KeyValueFile::parse_string(paper2014_config_text(),
                                                                      "paper-2014 (built-in)"));
    p.models = ModelPresets{};

    const double mhz = kTwoPi * 1e6;
    auto& r = p.reference;
    r["sigma_x"] = 7.5e-6;
    r["sigma_y"] = 28e-6;
    r["sigma_z"] = 28e-6;
    r["peak_density"] = 2.4e18; // 1/m^3
    r["e_field_gate"] = 0.23e6;
    r["e_field_target"] = 0.32e6;
    r["dipole_gate_ea0"] = 1.6e-3;  // in units of e a0
    r["dipole_target_ea0"] = 2.3e-3;
    r["rabi_gate"] = 4.7 * mhz;
    r["rabi_target"] = 9.4 * mhz;
    r["blockade_radius_gate"] = 18e-6;
    r["blockade_radius_target"] = 14e-6;
    r["absorption_length"] = 5e-6;
    r["transparency_width_gate"] = 1.7 * mhz;
    r["transparency_width_target"] = 4.0 * mhz;
    r["od_eit_pred_gate"] = 0.8;
    r["od_eit_pred_target"] = 0.7;
    r["group_velocity_formula"] = 500.0;
    r["group_velocity_delay"] = 300.0;
    r["correlation_time_pred"] = 0.12e-6;
    r["correlation_time_measured"] = 0.23e-6;
    r["dipole_potential_uK"] = 5.1;
    r["dipole_potential_avg_uK"] = 0.09;
    r["beta"] = 0.19;
    r["n_b_rapid_at_ng1"] = 0.56;
    r["eta_sb_chain"] = 0.41;
    r["od_b0_estimate"] = 5.6;
    return p;
}

} // namespace

const Preset& paper2014() {
    static const Preset p = build_paper2014();
    return p;
}

StorageParams Preset::storage_full() const {
    StorageParams s;
    s.eta_sb = models.stor_full_eta_sb;
    s.bins = models.stor_full_b;
    s.od = models.od_fit;
    s.od_eit = models.od_eit_fit;
    return s;
}

StorageParams Preset::storage_rapid() const {
    StorageParams s;
    s.eta_sb = models.stor_rapid_eta_sb;
    s.bins = models.stor_rapid_b;
    s.od = models.od_fit;
    s.od_eit = models.od_eit_fit;
    return s;
}

HeraldParams Preset::herald() const {
    return HeraldParams{models.eta_wr, config.detection_efficiency, models.p_h0};
}

SwitchParams Preset::switch_params() const {
    SwitchParams s;
    s.od_b0 = models.od_b0;
    s.n1 = models.n1;
    s.p_s = models.p_s;
    s.n0 = models.ps_n0 / models.p_s;
    s.t0 = models.prop_t0;
    s.bins = models.prop_b;
    return s;
}

eit::SpectrumParams Preset::eit_gate_spectrum() const {
    eit::SpectrumParams sp;
    sp.od = models.od_fit;
    sp.gamma = config.gamma;
    sp.delta0 = 0.0;
    sp.delta1 = 0.0;
    sp.t0 = std::exp(-models.od_eit_fit);
    sp.delta_t = 1.7 * kTwoPi * 1e6;
    return sp;
}

mc::Scenario Preset::scenario(StorageMode mode) const {
    mc::Scenario sc;
    sc.n_g = models.measured_n_g;
    sc.n_t = models.measured_n_t;
    sc.storage_mode = mode;
    sc.storage.eta_sb = models.stor_full_eta_sb;
    sc.storage.bins = models.stor_full_b;
    sc.storage.od = models.od_fit;
    sc.storage.od_eit = models.od_eit_fit;
    sc.target_bins = models.prop_b;
    sc.target_t0 = models.prop_t0;
    sc.od_b0 = models.od_b0;
    sc.n1 = models.n1;
    sc.n0 = models.ps_n0 / models.p_s;
    sc.herald = herald();
    return sc;
}

namespace {

// Optional [models] section: overrides for the fitted/measured model
// parameters bundled with the preset. Dimensionless unless noted.
void apply_model_overrides(ModelPresets& m, const KeyValueFile& kv) {
    struct Entry {
        const char* key;
        Dimension dim;
        double ModelPresets::*member;
    };
    static const Entry entries[] = {
        {"models.prop_b", Dimension::dimensionless, &ModelPresets::prop_b},
        {"models.prop_t0", Dimension::dimensionless, &ModelPresets::prop_t0},
        {"models.od_fit", Dimension::dimensionless, &ModelPresets::od_fit},
        {"models.od_eit_fit", Dimension::dimensionless, &ModelPresets::od_eit_fit},
        {"models.stor_full_b", Dimension::dimensionless, &ModelPresets::stor_full_b},
        {"models.stor_full_eta_sb", Dimension::dimensionless, &ModelPresets::stor_full_eta_sb},
        {"models.stor_rapid_b", Dimension::dimensionless, &ModelPresets::stor_rapid_b},
        {"models.stor_rapid_eta_sb", Dimension::dimensionless, &ModelPresets::stor_rapid_eta_sb},
        {"models.herald_b", Dimension::dimensionless, &ModelPresets::herald_b},
        {"models.eta_wr", Dimension::dimensionless, &ModelPresets::eta_wr},
        {"models.p_h0", Dimension::dimensionless, &ModelPresets::p_h0},
        {"models.eps_ideal", Dimension::dimensionless, &ModelPresets::eps_ideal},
        {"models.n_post0", Dimension::dimensionless, &ModelPresets::n_post0},
        {"models.od_b0", Dimension::dimensionless, &ModelPresets::od_b0},
        {"models.n1", Dimension::dimensionless, &ModelPresets::n1},
        {"models.p_s", Dimension::dimensionless, &ModelPresets::p_s},
        {"models.ps_n0", Dimension::dimensionless, &ModelPresets::ps_n0},
        {"models.tau_pop_low_density", Dimension::time, &ModelPresets::tau_pop_low_density},
        {"models.tau_pop_high_density", Dimension::time, &ModelPresets::tau_pop_high_density},
        {"models.eps_decay_start", Dimension::dimensionless, &ModelPresets::eps_decay_start},
        {"models.gamma0", Dimension::rate, &ModelPresets::gamma0},
        {"models.measured_n_g", Dimension::dimensionless, &ModelPresets::measured_n_g},
        {"models.measured_n_t", Dimension::dimensionless, &ModelPresets::measured_n_t},
    };
    for (const auto& e : entries)
        if (kv.has(e.key)) m.*(e.member) = parse_quantity(kv.raw(e.key), e.dim);
    // k_rho is (1/s)/(1/m^3); given as a bare SI number
    if (kv.has("models.k_rho")) m.k_rho = parse_quantity(kv.raw("models.k_rho"), Dimension::dimensionless);
}

Preset preset_from_file(const std::string& name, const std::string& path) {
    Preset p = paper2014(); // references stay built-in
    p.name = name;
    const KeyValueFile kv = KeyValueFile::parse_file(path);
    p.config = ExperimentConfig::from_file(kv);
    apply_model_overrides(p.models, kv);
    return p;
}

} // namespace

Preset load_preset(const std::string& name_or_path) {
    if (name_or_path == "paper-2014") return paper2014();

    if (const char* dir = std::getenv("SWITCHSIM_PRESET_DIR")) {
        const std::string candidate = std::string(dir) + "/" + name_or_path + ".cfg";
        std::ifstream probe(candidate);
        if (probe) return preset_from_file(name_or_path, candidate);
    }
    return preset_from_file(name_or_path, name_or_path);
}

} // namespace switchsim
