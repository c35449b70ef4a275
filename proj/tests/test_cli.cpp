#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef SWITCHSIM_BIN
#error "SWITCHSIM_BIN must point at the CLI binary"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout only
};

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    const std::string cmd =
        env_prefix + std::string(SWITCHSIM_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    std::array<char, 4096> buf;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) res.output.append(buf.data(), n);
    const int status = pclose(pipe);
    res.exit_code = WEXITSTATUS(status);
    return res;
}

std::string preset_file_text() {
    std::ifstream src(SWITCHSIM_PRESET_FILE);
    REQUIRE(src.good());
    std::stringstream ss;
    ss << src.rdbuf();
    return ss.str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_path(const std::string& name) {
    return std::string("cli_test_") + name;
}

} // namespace

TEST_CASE("derive: report contains the reference operating point") {
    const RunResult r = run("derive --preset paper-2014");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("blockade_radius_target") != std::string::npos);
    CHECK(r.output.find("absorption_length") != std::string::npos);
    CHECK(r.output.find("group_velocity_formula") != std::string::npos);
    // r_b,t lands near 14 um (the report prints um)
    const auto pos = r.output.find("blockade_radius_target");
    const std::string line = r.output.substr(pos, r.output.find('\n', pos) - pos);
    CHECK(line.find("13.7") != std::string::npos);
}

TEST_CASE("derive: config errors name the missing fields and exit 2") {
    const std::string path = temp_path("empty.cfg");
    std::ofstream(path) << "[atoms]\natom_number = 1e5\n";
    const RunResult r = run("derive --config " + path);
    CHECK(r.exit_code == 2);
    std::remove(path.c_str());
}

TEST_CASE("curve: unknown model lists the registry and exits 2") {
    const RunResult r = run("curve --model does_not_exist");
    CHECK(r.exit_code == 2);
}

TEST_CASE("curve: extinction starts at 1 and transmitted mean saturates") {
    const RunResult ext =
        run("curve --model extinction_vs_ng_full --from 0 --to 4 --points 5");
    CHECK(ext.exit_code == 0);
    std::istringstream lines(ext.output);
    std::string line;
    std::string first_row;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("n_g", 0) == 0) continue;
        first_row = line;
        break;
    }
    CHECK(first_row.rfind("0\t1", 0) == 0); // eps(0) = 1

    const RunResult tm =
        run("curve --model transmitted_mean --from 50 --to 60 --points 2");
    CHECK(tm.exit_code == 0);
    CHECK(tm.output.find("0.48") != std::string::npos); // b T0 asymptote
}

TEST_CASE("spectrum: transparency at both ends of the scan") {
    const RunResult r = run("spectrum --from-mhz -20 --to-mhz 20 --points 7");
    CHECK(r.exit_code == 0);
    std::istringstream lines(r.output);
    std::string line, first_data, last_data;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("delta", 0) == 0) continue;
        if (first_data.empty()) first_data = line;
        last_data = line;
    }
    auto second_col = [](const std::string& s) {
        return std::stod(s.substr(s.find('\t') + 1));
    };
    CHECK(second_col(first_data) > 0.9);
    CHECK(second_col(last_data) > 0.9);
}

TEST_CASE("montecarlo: summary is byte-identical across worker counts") {
    const std::string p1 = temp_path("mc1.json"), p8 = temp_path("mc8.json");
    const RunResult r1 =
        run("montecarlo --cycles 100000 --seed 11 --workers 1 --out " + p1);
    const RunResult r8 =
        run("montecarlo --cycles 100000 --seed 11 --workers 8 --out " + p8);
    CHECK(r1.exit_code == 0);
    CHECK(r8.exit_code == 0);
    CHECK(slurp(p1) == slurp(p8));
    // manifests exist alongside outputs
    CHECK(!slurp(p1 + ".manifest.json").empty());
    std::remove(p1.c_str());
    std::remove(p8.c_str());
    std::remove((p1 + ".manifest.json").c_str());
    std::remove((p8 + ".manifest.json").c_str());
}

TEST_CASE("montecarlo: N_g = 0 herald rate is the background rate") {
    const RunResult r = run("montecarlo --cycles 400000 --seed 3 --ng 0");
    CHECK(r.exit_code == 0);
    const auto pos = r.output.find("\"p_h\"");
    REQUIRE(pos != std::string::npos);
    const double p_h = std::stod(r.output.substr(r.output.find(':', pos) + 1));
    CHECK(p_h > 0.2e-4);
    CHECK(p_h < 3.5e-4);
}

TEST_CASE("fit: transmitted_mean round trip through files") {
    // generate a dataset with the curve subcommand, fit it back
    const std::string data = temp_path("tm.tsv");
    const RunResult gen =
        run("curve --model transmitted_mean --from 0.2 --to 7 --points 12 --out " + data);
    CHECK(gen.exit_code == 0);

    const RunResult fit = run("fit --model transmitted_mean --data " + data +
                              " --free t0,b --init t0=0.5 --init b=1.0");
    CHECK(fit.exit_code == 0);
    CHECK(fit.output.find("converged: yes") != std::string::npos);
    // noiseless data: recovers the generator parameters tightly
    auto value_of = [&](const std::string& name) {
        const auto pos = fit.output.find("\n" + name + " = ");
        REQUIRE(pos != std::string::npos);
        return std::stod(fit.output.substr(pos + name.size() + 4));
    };
    CHECK(value_of("t0") == doctest::Approx(0.30).epsilon(1e-6));
    CHECK(value_of("b") == doctest::Approx(1.6).epsilon(1e-6));
    std::remove(data.c_str());
    std::remove((data + ".manifest.json").c_str());
}

TEST_CASE("fit: non-convergence exits 4") {
    const std::string data = temp_path("nc.tsv");
    {
        std::ofstream out(data);
        out << "0.5 0.15\n1.5 0.3\n3 0.41\n5 0.46\n7 0.475\n";
    }
    // b sits at the bound and one iteration cannot converge
    const RunResult r = run("fit --model transmitted_mean --data " + data +
                            " --free t0,b --init t0=0.99 --init b=9.9");
    // either converges (fine) or reports 4; assert the exit code contract
    CHECK((r.exit_code == 0 || r.exit_code == 4));
    std::remove(data.c_str());
}

TEST_CASE("derive: reruns are byte-identical") {
    const RunResult a = run("derive --preset paper-2014");
    const RunResult b = run("derive --preset paper-2014");
    CHECK(a.output == b.output);
}

TEST_CASE("derive: validity warnings escalate the exit code") {
    // principal quantum number far outside the radial-integral range
    const std::string path = temp_path("n40.cfg");
    std::string text = preset_file_text();
    const auto pos = text.find("principal_n = 100");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 17, "principal_n = 40");
    std::ofstream(path) << text;
    const RunResult r = run("derive --config " + path);
    CHECK(r.exit_code == 3);
    std::remove(path.c_str());
}

TEST_CASE("preset directory env var resolves preset names") {
    std::string text = preset_file_text();
    const auto pos = text.find("atom_number = 2.2e5");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 19, "atom_number = 4.4e5");
    std::ofstream("my-run.cfg") << text;

    const RunResult r = run("derive --preset my-run", "SWITCHSIM_PRESET_DIR=. ");
    CHECK(r.exit_code == 0);
    // doubled atom number doubles the peak density (4.89e12 cm^-3)
    CHECK(r.output.find("4.89") != std::string::npos);
    std::remove("my-run.cfg");
}

TEST_CASE("config files can override model parameters") {
    std::string text = preset_file_text();
    text += "\n[models]\nprop_t0 = 0.5\nprop_b = 2.5\n";
    const std::string path = temp_path("models.cfg");
    std::ofstream(path) << text;
    // asymptote b*T0 = 1.25 shows up in the transmitted-photon summary via
    // the scenario: run a short cycles-mode simulation and check N_out
    const RunResult r =
        run("montecarlo --preset " + path + " --cycles 40000 --seed 9 --ng 0 --nt 40");
    CHECK(r.exit_code == 0);
    const auto pos = r.output.find("\"detected_ref\"");
    REQUIRE(pos != std::string::npos);
    const double detected = std::stod(r.output.substr(r.output.find(':', pos) + 1));
    // N_out -> b T0 = 1.25 at large N_t; detected  ~ cycles/2 * 1.25 * 0.27
    const double per_cycle = detected / (40000.0 / 2.0) / 0.27;
    CHECK(per_cycle == doctest::Approx(1.25).epsilon(0.05));
    std::remove(path.c_str());
}

TEST_CASE("montecarlo: g2 table modes emit flagged columns") {
    const RunResult r = run("montecarlo --mode g2-poisson --cycles 4000 --seed 5");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("tau\tg2\tse\tcoincidences\tflagged") != std::string::npos);
}
