// switchsim: derived parameters, model curves, Monte Carlo runs, fits, and
// the acceptance suite for the single-photon Rydberg-blockade switch models.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "switchsim/acceptance.hpp"
#include "switchsim/constants.hpp"
#include "switchsim/eit.hpp"
#include "switchsim/fitting.hpp"
#include "switchsim/models.hpp"
#include "switchsim/montecarlo.hpp"
#include "switchsim/params.hpp"
#include "switchsim/preset.hpp"
#include "switchsim/report.hpp"

using namespace switchsim;
using nlohmann::json;

namespace {

// exit codes, documented in --help and README
constexpr int kOk = 0;
constexpr int kErrUsage = 1;
constexpr int kErrConfig = 2;
constexpr int kErrValidity = 3;   // numeric-validity warnings escalated
constexpr int kErrNoConverge = 4; // fit did not converge
constexpr int kErrAcceptance = 5;

struct CommonOpts {
    std::string preset = "paper-2014";
    std::string out;
    std::string json_out;
};

Preset resolve_preset(const std::string& name) { return load_preset(name); }

void emit_manifest(const RunManifest& manifest) {
    for (const auto& out : manifest.outputs)
        write_file(out + ".manifest.json", manifest.to_json());
}

ParamMap parse_assignments(const std::vector<std::string>& items, const char* what) {
    ParamMap out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError(std::string(what) + " expects name=value, got '" + item + "'");
        out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return out;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

DataSeries read_data_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open data file '" + path + "'");
    DataSeries d;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        double x, y, sg;
        if (!(row >> x >> y)) continue;
        d.x.push_back(x);
        d.y.push_back(y);
        if (row >> sg) d.sigma.push_back(sg);
    }
    if (!d.sigma.empty() && d.sigma.size() != d.x.size())
        throw ConfigError("data file '" + path + "': some rows have sigma, some do not");
    return d;
}

void print_or_write(const std::string& content, const std::string& path) {
    if (path.empty())
        std::cout << content;
    else
        write_file(path, content);
}

int cmd_derive(const std::string& preset_name, const std::string& config_path,
               const std::string& out, const std::string& json_out) {
    Preset preset = config_path.empty() ? resolve_preset(preset_name) : [&] {
        Preset p = paper2014();
        p.name = config_path;
        p.config = ExperimentConfig::from_file(KeyValueFile::parse_file(config_path));
        return p;
    }();
    std::vector<std::string> warnings;
    const DerivedQuantities d = derive_all(preset.config, &warnings);
    print_or_write(derive_report_text(preset, d, warnings), out);
    if (!json_out.empty()) write_file(json_out, derive_report_json(preset, d, warnings));

    RunManifest manifest;
    manifest.subcommand = "derive";
    manifest.preset = preset.name;
    manifest.config_path = config_path;
    if (!out.empty()) manifest.outputs.push_back(out);
    if (!json_out.empty()) manifest.outputs.push_back(json_out);
    emit_manifest(manifest);
    if (!warnings.empty()) {
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
        return kErrValidity;
    }
    return kOk;
}

std::string fmt_params(const eit::SpectrumParams& sp);

int cmd_spectrum(const std::string& preset_name, double od, double t0, double gamma_mhz,
                 double delta_t_mhz, double delta0_mhz, double delta1_mhz, double from_mhz,
                 double to_mhz, int points, const std::string& out) {
    const Preset preset = resolve_preset(preset_name);
    eit::SpectrumParams sp = preset.eit_gate_spectrum();
    const double mhz = kTwoPi * 1e6;
    if (od >= 0) sp.od = od;
    if (t0 >= 0) sp.t0 = t0;
    if (gamma_mhz > 0) sp.gamma = gamma_mhz * mhz;
    if (delta_t_mhz > 0) sp.delta_t = delta_t_mhz * mhz;
    sp.delta0 = delta0_mhz * mhz;
    sp.delta1 = delta1_mhz * mhz;
    sp.validate();

    Table table;
    table.comments = {
        "model: eit_transmission",
        "T = exp(-od/(1+(2(d-delta0)/gamma)^2)) + t0 exp(-4 (d-delta1)^2 ln2/delta_t^2)",
        fmt_params(sp),
        "columns: detuning (MHz, ordinary frequency), transmission",
    };
    table.columns = {"delta_s_mhz", "transmission"};
    for (int i = 0; i < points; ++i) {
        const double f = from_mhz + (to_mhz - from_mhz) * i / (points - 1);
        table.rows.push_back({f, eit::transmission(f * mhz, sp)});
    }
    print_or_write(table.to_text(), out);

    RunManifest manifest;
    manifest.subcommand = "spectrum";
    manifest.preset = preset.name;
    if (!out.empty()) manifest.outputs.push_back(out);
    emit_manifest(manifest);
    return kOk;
}

std::string fmt_params(const eit::SpectrumParams& sp) {
    char buf[256];
    const double mhz = kTwoPi * 1e6;
    std::snprintf(buf, sizeof buf,
                  "params: od=%g t0=%g gamma=%g MHz delta_t=%g MHz delta0=%g MHz delta1=%g MHz",
                  sp.od, sp.t0, sp.gamma / mhz, sp.delta_t / mhz, sp.delta0 / mhz,
                  sp.delta1 / mhz);
    return buf;
}

int cmd_curve(const std::string& model_name, const std::vector<std::string>& sets, double from,
              double to, int points, const std::string& out) {
    const ModelInfo* model = find_model(model_name);
    if (!model) {
        std::cerr << "unknown model '" << model_name << "'. available models:\n";
        for (const auto& n : model_names()) std::cerr << "  " << n << "\n";
        return kErrConfig;
    }
    ParamMap params = model->defaults();
    for (const auto& [k, v] : parse_assignments(sets, "--set")) {
        if (!params.count(k))
            throw ConfigError("model '" + model_name + "' has no parameter '" + k + "'");
        params[k] = v;
    }
    if (points < 2) throw ConfigError("--points must be >= 2");
    if (!(to > from)) throw ConfigError("need --to > --from");

    Table table;
    std::string pline = "params:";
    for (const auto& [k, v] : params) pline += " " + k + "=" + format_double(v);
    table.comments = {"model: " + model_name, model->formula, pline};
    table.columns = {model->x_name, model_name};
    for (int i = 0; i < points; ++i) {
        const double x = from + (to - from) * i / (points - 1);
        table.rows.push_back({x, model->fn(x, params)});
    }
    print_or_write(table.to_text(), out);

    RunManifest manifest;
    manifest.subcommand = "curve";
    manifest.preset = model_name;
    if (!out.empty()) manifest.outputs.push_back(out);
    emit_manifest(manifest);
    return kOk;
}

json summary_to_json(const mc::CycleSummary& s) {
    const auto& a = s.agg;
    json j;
    j["cycles"] = a.cycles;
    j["gate_cycles"] = a.gate_cycles;
    j["ref_cycles"] = a.ref_cycles;
    j["gate_photons_in"] = a.gate_in;
    j["stored_excitations"] = a.stored_excitations;
    j["stored_cycles"] = a.stored_cycles;
    j["target_photons_in"] = a.target_in;
    j["transmitted_gate"] = a.transmitted_gate;
    j["transmitted_ref"] = a.transmitted_ref;
    j["detected_gate"] = a.detected_gate;
    j["detected_ref"] = a.detected_ref;
    j["heralds"] = a.heralds;
    j["background_heralds"] = a.background_heralds;
    j["heralded_cycles"] = a.heralded_cycles;
    j["heralded_detected"] = a.heralded_detected;
    j["eps_total"] = s.eps_total.value;
    j["eps_total_se"] = s.eps_total.stderr_sample;
    j["eps_total_se_shot"] = s.eps_total.stderr_shot;
    j["eps_total_samples"] = s.eps_total.n_samples;
    j["eps_global"] = s.eps_global;
    j["p_h"] = s.p_h;
    j["p_h_se"] = s.p_h_se;
    j["eps_post"] = s.eps_post;
    j["eps_post_se_shot"] = s.eps_post_shot_se;
    j["eps_post_se_jackknife"] = s.eps_post_jack_se;
    return j;
}

int cmd_montecarlo(const std::string& preset_name, const std::string& mode,
                   std::uint64_t cycles, std::uint64_t seed, int workers, double ng, double nt,
                   const std::string& storage_mode, double bin_width_us, const std::string& out,
                   const std::string& summary_out, const std::string& records_out) {
    const Preset preset = resolve_preset(preset_name);
    RunManifest manifest;
    manifest.subcommand = "montecarlo";
    manifest.preset = preset.name;
    manifest.seed = seed;

    if (mode == "cycles") {
        mc::Scenario sc = preset.scenario(storage_mode == "rapid" ? StorageMode::rapid
                                                                  : StorageMode::full);
        if (ng >= 0) sc.n_g = ng;
        if (nt >= 0) sc.n_t = nt;
        std::vector<mc::CycleRecord> records;
        const mc::CycleSummary s = mc::simulate_cycles(
            cycles, sc, seed, workers, records_out.empty() ? nullptr : &records);
        const json j = summary_to_json(s);
        const std::string text = j.dump(2) + "\n";
        print_or_write(text, out);
        if (!summary_out.empty()) write_file(summary_out, text);
        if (!records_out.empty()) {
            Table table;
            table.comments = {"per-cycle records; even cycle indices are the N_g=0 reference",
                              "columns: cycle, gate_in, stored, target_in, background_emitted, "
                              "transmitted, detected, herald, background_herald"};
            table.columns = {"cycle", "gate_in", "stored", "target_in", "background_emitted",
                             "transmitted", "detected", "herald", "background_herald"};
            for (const auto& r : records)
                table.rows.push_back({static_cast<double>(r.cycle_index),
                                      static_cast<double>(r.gate_in),
                                      static_cast<double>(r.stored),
                                      static_cast<double>(r.target_in),
                                      static_cast<double>(r.background_emitted),
                                      static_cast<double>(r.target_transmitted),
                                      static_cast<double>(r.target_detected),
                                      r.herald_detected ? 1.0 : 0.0,
                                      r.background_herald ? 1.0 : 0.0});
            write_file(records_out, table.to_text());
            manifest.outputs.push_back(records_out);
        }
        if (!out.empty()) manifest.outputs.push_back(out);
        if (!summary_out.empty()) manifest.outputs.push_back(summary_out);
        emit_manifest(manifest);
        return kOk;
    }

    // click-level modes emit a g2 table
    std::vector<mc::ClickRecord> clicks;
    double window = 2e-6;
    if (mode == "g2-poisson") {
        clicks = mc::generate_poisson_clicks(cycles, 3e6, window, seed);
    } else if (mode == "g2-retrieval") {
        window = 0.3e-6;
        clicks = mc::generate_retrieval_clicks(cycles, 0.10, 0.005, window, seed);
    } else if (mode == "g2-blockade") {
        window = 4e-6;
        clicks = mc::generate_blockade_clicks(cycles, 1.2e6, 1.2e6, window,
                                              preset.config.correlation_time, seed);
    } else {
        std::cerr << "unknown montecarlo mode '" << mode
                  << "' (cycles, g2-poisson, g2-retrieval, g2-blockade)\n";
        return kErrConfig;
    }
    const double bin_width = (bin_width_us > 0 ? bin_width_us : 0.05) * 1e-6;
    const auto rows = mc::estimate_g2(clicks, bin_width, window / 2.0);
    Table table;
    table.comments = {"g2 cross-detector coincidence estimator, mode " + mode,
                      "normalization: next-cycle shuffle",
                      "columns: tau (s), g2, standard error, coincidences, flagged"};
    table.columns = {"tau", "g2", "se", "coincidences", "flagged"};
    for (const auto& r : rows)
        table.rows.push_back({r.tau, r.g2, r.se, static_cast<double>(r.coincidences),
                              r.flagged ? 1.0 : 0.0});
    print_or_write(table.to_text(), out);
    if (!out.empty()) manifest.outputs.push_back(out);
    emit_manifest(manifest);
    return kOk;
}

int cmd_fit(const std::string& model_name, const std::string& data_path,
            const std::string& free_csv, const std::vector<std::string>& fixes,
            const std::vector<std::string>& inits, const std::string& out,
            const std::string& json_out) {
    const ModelInfo* model = find_model(model_name);
    if (!model) {
        std::cerr << "unknown model '" << model_name << "'. available models:\n";
        for (const auto& n : model_names()) std::cerr << "  " << n << "\n";
        return kErrConfig;
    }
    const DataSeries data = read_data_file(data_path);

    FitProblem prob;
    prob.model = model->fn;
    prob.free_params = split_csv(free_csv);
    if (prob.free_params.empty()) throw ConfigError("--free must name at least one parameter");
    const ParamMap fix_overrides = parse_assignments(fixes, "--fix");
    const ParamMap init_overrides = parse_assignments(inits, "--init");
    for (const auto& spec : model->params) {
        const bool is_free = std::find(prob.free_params.begin(), prob.free_params.end(),
                                       spec.name) != prob.free_params.end();
        if (is_free) {
            const auto it = init_overrides.find(spec.name);
            prob.initial[spec.name] = (it != init_overrides.end()) ? it->second : spec.value;
            prob.bounds[spec.name] = {spec.lo, spec.hi};
        } else {
            const auto it = fix_overrides.find(spec.name);
            prob.fixed[spec.name] = (it != fix_overrides.end()) ? it->second : spec.value;
        }
    }
    const FitResult res = fit(prob, data);

    std::ostringstream os;
    os << "# fit of model " << model_name << " to " << data_path << "\n";
    os << "# " << model->formula << "\n";
    os << "converged: " << (res.converged ? "yes" : "no") << " (" << res.message << ")\n";
    os << "iterations: " << res.iterations << "\n";
    os << "residual_norm: " << format_double(res.residual_norm) << "\n";
    for (const auto& name : prob.free_params)
        os << name << " = " << format_double(res.values.at(name)) << " +- "
           << format_double(res.std_errors.at(name)) << "\n";
    for (const auto& [k, v] : prob.fixed) os << k << " = " << format_double(v) << " (fixed)\n";
    print_or_write(os.str(), out);

    if (!json_out.empty()) {
        json j;
        j["model"] = model_name;
        j["converged"] = res.converged;
        j["message"] = res.message;
        j["iterations"] = res.iterations;
        j["residual_norm"] = res.residual_norm;
        j["values"] = res.values;
        j["std_errors"] = res.std_errors;
        write_file(json_out, j.dump(2) + "\n");
    }

    RunManifest manifest;
    manifest.subcommand = "fit";
    manifest.preset = model_name;
    manifest.config_path = data_path;
    if (!out.empty()) manifest.outputs.push_back(out);
    if (!json_out.empty()) manifest.outputs.push_back(json_out);
    emit_manifest(manifest);
    return res.converged ? kOk : kErrNoConverge;
}

int cmd_acceptance(const std::string& out, bool quiet) {
    const AcceptanceReport report = run_acceptance(quiet ? nullptr : &std::cerr);
    print_or_write(report.render(), out);
    if (!out.empty()) {
        RunManifest manifest;
        manifest.subcommand = "acceptance";
        manifest.preset = "paper-2014";
        manifest.outputs.push_back(out);
        emit_manifest(manifest);
    }
    return report.all_pass() ? kOk : kErrAcceptance;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-photon Rydberg-blockade switch models: derived parameters, curves, "
                 "Monte Carlo, fits"};
    app.require_subcommand(1);

    // derive
    std::string preset = "paper-2014", config_path, out, json_out;
    auto* derive = app.add_subcommand("derive", "compute all derived quantities");
    derive->add_option("--preset", preset, "built-in preset name")->capture_default_str();
    derive->add_option("--config", config_path, "config file (overrides --preset)");
    derive->add_option("--out", out, "write report here (default: stdout)");
    derive->add_option("--json", json_out, "also write a machine-readable record");

    // spectrum
    std::string sp_preset = "paper-2014", sp_out;
    double sp_od = -1, sp_t0 = -1, sp_gamma = -1, sp_dt = -1, sp_d0 = 0, sp_d1 = 0;
    double sp_from = -20, sp_to = 20;
    int sp_points = 60;
    auto* spectrum = app.add_subcommand("spectrum", "EIT transmission spectrum table");
    spectrum->add_option("--preset", sp_preset)->capture_default_str();
    spectrum->add_option("--od", sp_od, "optical depth (default: preset)");
    spectrum->add_option("--t0", sp_t0, "resonant transmission (default: preset)");
    spectrum->add_option("--gamma-mhz", sp_gamma, "linewidth/2pi in MHz");
    spectrum->add_option("--delta-t-mhz", sp_dt, "transparency FWHM/2pi in MHz");
    spectrum->add_option("--delta0-mhz", sp_d0, "absorption-line center offset");
    spectrum->add_option("--delta1-mhz", sp_d1, "transparency-peak center offset");
    spectrum->add_option("--from-mhz", sp_from)->capture_default_str();
    spectrum->add_option("--to-mhz", sp_to)->capture_default_str();
    spectrum->add_option("--points", sp_points)->capture_default_str();
    spectrum->add_option("--out", sp_out, "write table here (default: stdout)");

    // curve
    std::string cv_model, cv_out;
    std::vector<std::string> cv_sets;
    double cv_from = 0, cv_to = 4;
    int cv_points = 41;
    auto* curve = app.add_subcommand("curve", "sample a registered model curve");
    curve->add_option("--model", cv_model, "model name (see --model help for the list)")
        ->required();
    curve->add_option("--set", cv_sets, "override parameter, name=value (repeatable)");
    curve->add_option("--from", cv_from)->capture_default_str();
    curve->add_option("--to", cv_to)->capture_default_str();
    curve->add_option("--points", cv_points)->capture_default_str();
    curve->add_option("--out", cv_out, "write table here (default: stdout)");

    // montecarlo
    std::string mc_preset = "paper-2014", mc_mode = "cycles", mc_storage = "full", mc_out,
                mc_summary, mc_records;
    std::uint64_t mc_cycles = 100000, mc_seed = 1;
    int mc_workers = 1;
    double mc_ng = -1, mc_nt = -1, mc_binw = -1;
    auto* monte = app.add_subcommand("montecarlo", "stochastic gate-target cycles / g2 tables");
    monte->add_option("--preset", mc_preset)->capture_default_str();
    monte->add_option("--mode", mc_mode, "cycles | g2-poisson | g2-retrieval | g2-blockade")
        ->capture_default_str();
    monte->add_option("--cycles", mc_cycles)->capture_default_str();
    monte->add_option("--seed", mc_seed)->capture_default_str();
    monte->add_option("--workers", mc_workers)->capture_default_str();
    monte->add_option("--ng", mc_ng, "override mean gate photon number");
    monte->add_option("--nt", mc_nt, "override mean target photon number");
    monte->add_option("--storage", mc_storage, "full | rapid")->capture_default_str();
    monte->add_option("--bin-width-us", mc_binw, "g2 lag bin width in us");
    monte->add_option("--out", mc_out, "write summary/table here (default: stdout)");
    monte->add_option("--summary", mc_summary, "also write the summary record here");
    monte->add_option("--records", mc_records, "dump per-cycle records as a table (cycles mode)");

    // fit
    std::string ft_model, ft_data, ft_free, ft_out, ft_json;
    std::vector<std::string> ft_fix, ft_init;
    auto* fitcmd = app.add_subcommand("fit", "weighted least-squares fit of a registered model");
    fitcmd->add_option("--model", ft_model)->required();
    fitcmd->add_option("--data", ft_data, "delimited file: x y [sigma]")->required();
    fitcmd->add_option("--free", ft_free, "comma-separated free parameter names")->required();
    fitcmd->add_option("--fix", ft_fix, "fix parameter, name=value (repeatable)");
    fitcmd->add_option("--init", ft_init, "initial value, name=value (repeatable)");
    fitcmd->add_option("--out", ft_out, "write result here (default: stdout)");
    fitcmd->add_option("--json", ft_json, "also write a machine-readable record");

    // acceptance
    std::string ac_out;
    bool ac_quiet = false;
    auto* acc = app.add_subcommand("acceptance", "run the full acceptance suite");
    acc->add_option("--out", ac_out, "write the report here (default: stdout)");
    acc->add_flag("--quiet", ac_quiet, "suppress progress lines on stderr");

    CLI11_PARSE(app, argc, argv);

    try {
        if (derive->parsed()) return cmd_derive(preset, config_path, out, json_out);
        if (spectrum->parsed())
            return cmd_spectrum(sp_preset, sp_od, sp_t0, sp_gamma, sp_dt, sp_d0, sp_d1, sp_from,
                                sp_to, sp_points, sp_out);
        if (curve->parsed())
            return cmd_curve(cv_model, cv_sets, cv_from, cv_to, cv_points, cv_out);
        if (monte->parsed())
            return cmd_montecarlo(mc_preset, mc_mode, mc_cycles, mc_seed, mc_workers, mc_ng,
                                  mc_nt, mc_storage, mc_binw, mc_out, mc_summary, mc_records);
        if (fitcmd->parsed())
            return cmd_fit(ft_model, ft_data, ft_free, ft_fix, ft_init, ft_out, ft_json);
        if (acc->parsed()) return cmd_acceptance(ac_out, ac_quiet);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kErrConfig;
    } catch (const FitError& e) {
        std::cerr << "fit error: " << e.what() << "\n";
        return kErrNoConverge;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kErrUsage;
    }
    return kErrUsage;
}
