#include "nctheta/config.hpp"
#include "nctheta/error.hpp"
#include "nctheta/export.hpp"
#include "nctheta/quantum_theta.hpp"
#include "nctheta/report.hpp"
#include "nctheta/suites.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitCheckFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct Options {
    std::string suite;
    std::string config_path;
    std::optional<int> radius;
    std::optional<double> tol_oracle;
    std::optional<std::uint64_t> seed;
    std::string output;
    std::string format;
    std::string coefficients;
    bool allow_invalid = false;
};

nctheta::RunConfig load(const Options& opt) {
    using nctheta::ConfigError;
    using nctheta::ErrorCode;
    const std::string text = nctheta::read_text_file(opt.config_path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(ErrorCode::ConfigSyntax, "", e.what());
    }
    if (opt.allow_invalid && doc.is_object() && doc.contains("embedding") && doc["embedding"].is_object()) {
        doc["embedding"]["allow_invalid"] = true;
    }
    nctheta::RunConfig cfg = nctheta::parse_config(doc);

    if (opt.radius) {
        if (*opt.radius < 1) throw ConfigError(ErrorCode::ConfigInvalid, "/radius", "--radius must be >= 1");
        cfg.radius = *opt.radius;
    }
    if (opt.tol_oracle) {
        if (!(*opt.tol_oracle > 0.0))
            throw ConfigError(ErrorCode::ConfigInvalid, "/tolerances/oracle_rel", "--tol-oracle must be positive");
        cfg.tolerances.oracle_rel = *opt.tol_oracle;
    }
    if (opt.seed) cfg.seed = *opt.seed;
    if (!opt.output.empty()) cfg.output_path = opt.output;
    if (opt.format == "json") cfg.format = nctheta::OutputFormat::Json;
    if (opt.format == "csv") cfg.format = nctheta::OutputFormat::Csv;
    return cfg;
}

int run(const Options& opt) {
    const nctheta::Suite suite = nctheta::parse_suite(opt.suite);
    const nctheta::RunConfig cfg = load(opt);
    nctheta::require_seed_if_needed(cfg, suite);

    const nctheta::RunReport report = nctheta::run_suite(cfg, suite);

    if (cfg.output_path.empty()) {
        const auto text = cfg.format == nctheta::OutputFormat::Json ? nctheta::to_json(report).dump(2) + "\n"
                                                                     : nctheta::to_csv(report);
        std::cout << text;
    } else {
        nctheta::write_report(report, cfg.format, cfg.output_path);
    }

    if (!opt.coefficients.empty()) {
        const auto phi = nctheta::build_embedding(cfg.embedding);
        const auto cs = nctheta::make_complex_structure(phi, cfg.tau, cfg.lattice_decay);
        const auto series = nctheta::quantum_theta_series(phi, cs, cfg.radius);
        const auto table = nctheta::coefficient_table(series, nctheta::config_hash(cfg));
        nctheta::save_coefficients(table, opt.coefficients);
    }

    std::size_t failed = 0;
    for (const auto& c : report.checks) {
        if (!c.pass) {
            ++failed;
            std::cerr << "FAIL " << c.name << " statistic=" << nctheta::format_double(c.statistic)
                      << " tolerance=" << nctheta::format_double(c.tolerance) << "\n";
        }
    }
    std::fprintf(stderr, "%s: %zu checks, %zu failed, %.3f s\n", nctheta::to_string(suite).c_str(),
                 report.checks.size(), failed, report.elapsed_seconds);
    return report.pass ? 0 : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum theta verification for the noncommutative 4-torus"};
    Options opt;
    app.add_option("suite", opt.suite,
                   "validate|commutation|connections|holomorphy|nogo|inner-product|quantum-theta|"
                   "functional-equation|consistency|additivity|oracle-compare|all")
        ->required();
    app.add_option("--config", opt.config_path, "JSON run configuration")->required();
    app.add_option("--radius", opt.radius, "truncation radius for the coefficient series");
    app.add_option("--tol-oracle", opt.tol_oracle, "relative tolerance for oracle comparisons");
    app.add_option("--seed", opt.seed, "64-bit seed for randomized checks");
    app.add_option("--output", opt.output, "report path (stdout if omitted and not set in the config)");
    app.add_option("--format", opt.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--coefficients", opt.coefficients, "also export the coefficient table (.csv or .json)");
    app.add_flag("--allow-invalid", opt.allow_invalid, "accept embeddings that break the column condition");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        return run(opt);
    } catch (const nctheta::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == nctheta::ErrorCode::IoError ? kExitIo : kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailure;
    }
}
