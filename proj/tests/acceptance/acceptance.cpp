// Prints one PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include "nctheta/config.hpp"
#include "nctheta/error.hpp"
#include "nctheta/report.hpp"
#include "nctheta/special_functions.hpp"
#include "nctheta/suites.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace nctheta;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 42;

fs::path g_source;
fs::path g_cli;

RunConfig config(const std::string& name) {
    RunConfig cfg = load_config(g_source / "configs" / name);
    cfg.seed = kSeed;
    return cfg;
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

/// Requires the named check to exist and pass; appends its statistic to the detail line.
const VerificationReport* expect_check(Outcome& o, const RunReport& r, const std::string& name,
                                       const std::string& tag) {
    const VerificationReport* c = r.find(name);
    if (!c) {
        o.require(false, tag + " " + name + " missing");
        return nullptr;
    }
    o.detail << " " << tag << ":" << name << "=" << format_double(c->statistic);
    o.require(c->pass, tag + " " + name);
    return c;
}

Outcome oracle_equivalence() {
    Outcome o;
    for (const auto& [file, tag] : {std::pair{"canonical_lattice.json", "lattice"}, {"canonical_vector.json", "vector"}}) {
        const auto start = std::chrono::steady_clock::now();
        const RunReport r = run_suite(config(file), Suite::OracleCompare);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (const auto* c = expect_check(o, r, "oracle_equivalence", tag)) {
            o.require(c->metadata.value("indices", 0) == 625, std::string(tag) + " index count");
        }
        o.require(secs <= 60.0, std::string(tag) + " runtime");
    }
    return o;
}

Outcome computational_lemma() {
    Outcome o;
    const RunReport r = run_suite(config("canonical_lattice.json"), Suite::QuantumTheta);
    if (const auto* c = expect_check(o, r, "completed_square_lemma", "lattice")) {
        o.require(c->metadata.value("samples", 0) == 100, "sample count");
        o.require(c->tolerance <= 1e-12, "tolerance");
    }
    return o;
}

Outcome commutation_phases() {
    Outcome o;
    for (const auto& [file, tag] : {std::pair{"canonical_lattice.json", "lattice"},
                                    {"canonical_vector.json", "vector"},
                                    {"finite_part_vector.json", "finite"}}) {
        const RunReport r = run_suite(config(file), Suite::Commutation);
        expect_check(o, r, "commutation_phase_sampled", tag);
        expect_check(o, r, "commutation_phase_closed_form", tag);
    }
    return o;
}

Outcome connection_contract() {
    Outcome o;
    for (const auto& [file, tag] : {std::pair{"canonical_lattice.json", "lattice"}, {"canonical_vector.json", "vector"}}) {
        RunConfig cfg = config(file);
        cfg.fd_step = 1e-3;
        const RunReport r = run_suite(cfg, Suite::Connections);
        if (const auto* c = expect_check(o, r, "connection_commutator", tag)) {
            o.require(c->residuals.size() == 16, std::string(tag) + " pair count");
        }
        expect_check(o, r, "connection_refinement", tag);
    }
    return o;
}

Outcome holomorphy() {
    Outcome o;
    for (const auto& [file, tag] : {std::pair{"canonical_lattice.json", "lattice"}, {"canonical_vector.json", "vector"}}) {
        const RunReport r = run_suite(config(file), Suite::Holomorphy);
        expect_check(o, r, "theta_vector_holomorphy", tag);
        expect_check(o, r, "holomorphy_negative_control", tag);
    }
    return o;
}

Outcome nogo() {
    Outcome o;
    const RunReport r = run_suite(config("canonical_lattice.json"), Suite::NoGo);
    if (const auto* c = expect_check(o, r, "nogo_certificate", "lattice")) {
        o.require(c->metadata.value("certified", 0) == 100, "20 tau x 5 m certified");
    }
    expect_check(o, r, "nogo_degenerate_tau", "lattice");
    return o;
}

Outcome vector_manin_functional() {
    Outcome o;
    const RunConfig cfg = config("canonical_vector.json");
    const RunReport cons = run_suite(cfg, Suite::Consistency);
    expect_check(o, cons, "manin_identity", "vector");
    const RunReport fe = run_suite(cfg, Suite::FunctionalEquation);
    if (const auto* c = expect_check(o, fe, "functional_equation", "vector")) {
        o.require(c->tolerance <= 1e-9, "tolerance");
        o.require(c->metadata.value("translation", "") == "exp(-pi H(g,h))", "independent translation factor");
    }
    return o;
}

Outcome lattice_functional_consistency() {
    Outcome o;
    const RunConfig cfg = config("canonical_lattice.json");
    const RunReport fe = run_suite(cfg, Suite::FunctionalEquation);
    if (const auto* c = expect_check(o, fe, "functional_equation", "lattice")) o.require(c->tolerance <= 1e-12, "tol");
    const RunReport cons = run_suite(cfg, Suite::Consistency);
    if (const auto* c = expect_check(o, cons, "consistency_condition", "lattice")) o.require(c->tolerance <= 1e-12, "tol");
    return o;
}

Outcome additivity() {
    Outcome o;
    const RunReport v = run_suite(config("canonical_vector.json"), Suite::Additivity);
    expect_check(o, v, "additivity_vector", "vector");

    const RunConfig cfg = config("canonical_lattice.json");
    const RunReport l = run_suite(cfg, Suite::Additivity);
    const auto* c = expect_check(o, l, "additivity_lattice_witness", "lattice");
    const nlohmann::json golden = nlohmann::json::parse(read_text_file(g_source / "tests/golden/additivity_witness.json"));
    if (c) {
        const double gap = c->metadata.at("gap").get<double>();
        const double frozen = golden.at("gap").get<double>();
        o.detail << " golden=" << format_double(frozen);
        o.require(std::abs(gap - frozen) <= 1e-12 * frozen, "golden gap");
        o.require(golden.at("config_hash") == config_hash(cfg), "golden config hash");
    }
    return o;
}

Outcome special_functions() {
    Outcome o;
    const RunReport r = run_suite(config("canonical_lattice.json"), Suite::QuantumTheta);
    expect_check(o, r, "jacobi_theta_identities", "seeded");
    const double v = jacobi_theta({{0.0, 1.0}, 0.0}).value.real();
    o.detail << " theta(i,0)=" << format_double(v);
    o.require(std::abs(v - 1.086434811213308) <= 1e-12, "theta(i,0)");
    return o;
}

Outcome reproducibility() {
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / "nctheta_acceptance";
    fs::create_directories(dir);
    std::vector<std::string> reports;
    for (int run = 0; run < 2; ++run) {
        const fs::path out = dir / ("run" + std::to_string(run) + ".json");
        fs::remove(out);
        const std::string cmd = "\"" + g_cli.string() + "\" all --config \"" +
                                (g_source / "configs/canonical_lattice.json").string() + "\" --seed 42 --output \"" +
                                out.string() + "\" --format json 2>/dev/null";
        const int status = std::system(cmd.c_str());
        o.require(status == 0, "exit code of run " + std::to_string(run + 1));
        try {
            reports.push_back(read_text_file(out));
        } catch (const Error&) {
            o.require(false, "report " + std::to_string(run + 1) + " missing");
            return o;
        }
    }
    o.require(reports[0] == reports[1], "byte-identical reports");
    o.detail << " bytes=" << reports[0].size();
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: acceptance <source-dir> <nctheta-binary>\n";
        return 2;
    }
    g_source = argv[1];
    g_cli = argv[2];

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"computational lemma", computational_lemma},
        {"commutation phases", commutation_phases},
        {"connection contract", connection_contract},
        {"holomorphy", holomorphy},
        {"no-go certificate", nogo},
        {"vector manin identity and functional equation", vector_manin_functional},
        {"lattice functional equation and consistency", lattice_functional_consistency},
        {"additivity dichotomy", additivity},
        {"special functions", special_functions},
        {"reproducibility", reproducibility},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        failures += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ":" << o.detail.str()
                  << std::endl;
    }
    return failures;
}
