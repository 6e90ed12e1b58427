#include "fixtures.hpp"
#include "nctheta/config.hpp"
#include "nctheta/error.hpp"
#include "nctheta/export.hpp"
#include "nctheta/report.hpp"
#include "nctheta/rng.hpp"
#include "nctheta/suites.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nctheta;
using nlohmann::json;

namespace {

std::filesystem::path source(const std::string& rel) { return std::filesystem::path(NCTHETA_SOURCE_DIR) / rel; }

std::filesystem::path temp(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "nctheta_unit";
    std::filesystem::create_directories(dir);
    return dir / name;
}

json lattice_doc() { return json::parse(read_text_file(source("configs/canonical_lattice.json"))); }

ErrorCode config_error_code(const json& doc, std::string* pointer = nullptr) {
    try {
        (void)parse_config(doc);
    } catch (const ConfigError& e) {
        if (pointer) *pointer = e.pointer();
        return e.code();
    }
    return ErrorCode::IoError;
}

}  // namespace

TEST(Rng, ReferenceSequence) {
    SplitMix64 r(1234567);
    EXPECT_EQ(r.next(), 6457827717110365317ULL);
    EXPECT_EQ(r.next(), 3203168211198807973ULL);
    EXPECT_EQ(r.next(), 9817491932198370423ULL);
    EXPECT_EQ(fnv1a64("hello"), 0xa430d84680aabd0bULL);
}

TEST(Rng, RangesAndSplitting) {
    SplitMix64 r(42);
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        const int k = r.uniform_int(-2, 2);
        EXPECT_GE(k, -2);
        EXPECT_LE(k, 2);
    }
    SplitMix64 a = SplitMix64(42).split("nogo");
    SplitMix64 b = SplitMix64(42).split("nogo");
    SplitMix64 c = SplitMix64(42).split("additivity");
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_NE(x, c.next());
}

TEST(Config, CanonicalLattice) {
    const RunConfig cfg = load_config(source("configs/canonical_lattice.json"));
    EXPECT_EQ(cfg.embedding.kind, EmbeddingKind::Lattice);
    EXPECT_EQ(cfg.radius, 4);
    EXPECT_EQ(cfg.tolerances.oracle_rel, 1e-8);
    EXPECT_EQ(cfg.tolerances.identity_abs, 1e-12);
    EXPECT_EQ(cfg.tolerances.phase_abs, 1e-9);
    EXPECT_NEAR(commutation_matrix(build_embedding(cfg.embedding))(2, 3), 0.4, 1e-15);
}

TEST(Config, CanonicalVector) {
    const RunConfig cfg = load_config(source("configs/canonical_vector.json"));
    EXPECT_EQ(cfg.embedding.kind, EmbeddingKind::VectorSpace);
    EXPECT_EQ(cfg.tau(0, 0), cplx(0.0, 0.5));
}

TEST(Config, Defaults) {
    json doc = lattice_doc();
    doc.erase("radius");
    doc.erase("tolerances");
    const RunConfig cfg = parse_config(doc);
    EXPECT_EQ(cfg.radius, 4);
    EXPECT_EQ(cfg.tolerances.oracle_rel, 1e-8);
    EXPECT_EQ(cfg.fd_step, 1e-3);
    EXPECT_FALSE(cfg.seed.has_value());
}

TEST(Config, EmbeddingViolationCitesColumnThree) {
    json doc = lattice_doc();
    doc["embedding"]["delta_hat"][0][0] = 0.1;
    std::string pointer;
    EXPECT_EQ(config_error_code(doc, &pointer), ErrorCode::ConfigInvalid);
    EXPECT_EQ(pointer, "/embedding/delta_hat");
    try {
        (void)parse_config(doc);
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("column 3"), std::string::npos);
    }
    doc["embedding"]["allow_invalid"] = true;
    EXPECT_NO_THROW((void)parse_config(doc));
}

TEST(Config, SchemaViolations) {
    std::string pointer;
    json doc = lattice_doc();
    doc["bogus"] = 1;
    EXPECT_EQ(config_error_code(doc, &pointer), ErrorCode::ConfigInvalid);

    doc = lattice_doc();
    doc["tolerances"]["oracle_rel"] = -1.0;
    EXPECT_EQ(config_error_code(doc, &pointer), ErrorCode::ConfigInvalid);
    EXPECT_EQ(pointer, "/tolerances/oracle_rel");

    doc = lattice_doc();
    doc["embedding"].erase("theta1");
    EXPECT_EQ(config_error_code(doc, &pointer), ErrorCode::ConfigInvalid);
    EXPECT_EQ(pointer, "/embedding/theta1");

    doc = lattice_doc();
    doc["embedding"]["m"][0][0] = 1.5;
    EXPECT_EQ(config_error_code(doc, &pointer), ErrorCode::ConfigInvalid);
    EXPECT_EQ(pointer, "/embedding/m/0/0");

    doc = lattice_doc();
    doc["radius"] = 0;
    EXPECT_EQ(config_error_code(doc, &pointer), ErrorCode::ConfigInvalid);
}

TEST(Config, SyntaxAndIo) {
    const auto bad = temp("bad.json");
    write_text_file(bad, "{ \"embedding\": ");
    try {
        (void)load_config(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConfigSyntax);
    }
    try {
        (void)load_config(temp("does_not_exist.json"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IoError);
    }
}

TEST(Config, SeedRequiredForRandomizedSuites) {
    const RunConfig cfg = load_config(source("configs/canonical_lattice.json"));
    EXPECT_NO_THROW(require_seed_if_needed(cfg, Suite::Validate));
    try {
        require_seed_if_needed(cfg, Suite::NoGo);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConfigInvalid);
        EXPECT_EQ(e.pointer(), "/seed");
    }
    EXPECT_THROW((void)run_suite(cfg, Suite::All), ConfigError);
}

TEST(Config, SuiteNames) {
    for (const char* name : {"validate", "commutation", "connections", "holomorphy", "nogo", "inner-product",
                             "quantum-theta", "functional-equation", "consistency", "additivity", "oracle-compare",
                             "all"})
        EXPECT_EQ(to_string(parse_suite(name)), name);
    EXPECT_THROW((void)parse_suite("everything"), ConfigError);
}

TEST(Config, HashIgnoresOutputButNotSeed) {
    RunConfig a = load_config(source("configs/canonical_lattice.json"));
    RunConfig b = a;
    b.output_path = "elsewhere.json";
    b.format = OutputFormat::Csv;
    EXPECT_EQ(config_hash(a), config_hash(b));
    b.seed = 42;
    EXPECT_NE(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 16u);
    // Round trip through the echoed JSON.
    EXPECT_EQ(config_hash(parse_config(to_json(b))), config_hash(b));
}

TEST(Report, JsonAndCsv) {
    RunConfig cfg = load_config(source("configs/canonical_lattice.json"));
    const RunReport r = run_suite(cfg, Suite::Validate);
    EXPECT_TRUE(r.pass);
    const json j = to_json(r);
    EXPECT_EQ(j["rng"], "splitmix64");
    EXPECT_EQ(j["tool"], "nctheta");
    EXPECT_EQ(j["config_hash"], config_hash(cfg));
    EXPECT_EQ(j["summary"]["failed"], 0);
    EXPECT_FALSE(j.contains("elapsed_seconds"));
    const std::string csv = to_csv(r);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "suite,check,statistic,tolerance,bound,pass");
    EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), r.checks.size() + 1);
    EXPECT_NE(r.find("cocycle_identity"), nullptr);
    EXPECT_EQ(r.find("no such check"), nullptr);
    EXPECT_EQ(exit_code(r), 0);
}

TEST(Report, ModuleErrorsBecomeFailedChecks) {
    RunConfig cfg = load_config(source("configs/canonical_lattice.json"));
    cfg.tau(0, 0) = cplx(0.0, -1.0);  // Im T < 0
    const RunReport r = run_suite(cfg, Suite::Holomorphy);
    EXPECT_FALSE(r.pass);
    ASSERT_FALSE(r.checks.empty());
    EXPECT_TRUE(r.checks.front().metadata.contains("error_code"));
    EXPECT_EQ(exit_code(r), 1);
}

TEST(Report, WriteFailureIsIoError) {
    RunReport r;
    try {
        write_report(r, OutputFormat::Json, "/nonexistent_dir/x/report.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IoError);
    }
}

TEST(Report, Determinism) {
    RunConfig cfg = load_config(source("configs/canonical_lattice.json"));
    cfg.seed = 42;
    const auto a = to_json(run_suite(cfg, Suite::NoGo)).dump(2);
    const auto b = to_json(run_suite(cfg, Suite::NoGo)).dump(2);
    EXPECT_EQ(a, b);
    cfg.seed = 43;
    EXPECT_NE(a, to_json(run_suite(cfg, Suite::NoGo)).dump(2));
}

TEST(Export, CsvRadiusOne) {
    const auto phi = fixtures::lattice();
    const auto series = quantum_theta_series(phi, fixtures::lattice_structure(), 1);
    const auto table = coefficient_table(series, "abc");
    const std::string csv = format_csv(table);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "k1,k2,k3,k4,w1,w2,m1,m2,t1,t2,re,im");
    std::size_t rows = 0;
    std::string first;
    while (std::getline(in, line)) {
        if (rows == 0) first = line;
        ++rows;
    }
    EXPECT_EQ(rows, 81u);
    EXPECT_EQ(first.substr(0, 8), "0,0,0,0,");
    ASSERT_EQ(table.rows.front().k, (LatticeIndex{0, 0, 0, 0}));
    EXPECT_NEAR(table.rows.front().re, fixtures::kBTilde0, 1e-15);
    EXPECT_EQ(table.rows.front().im, 0.0);
}

TEST(Export, RoundTripIsByteIdentical) {
    const auto phi = fixtures::lattice();
    const auto series = quantum_theta_series(phi, fixtures::lattice_structure(), 2);
    for (const std::string ext : {".csv", ".json"}) {
        const auto first = temp("coefficients" + ext);
        const auto second = temp("coefficients_again" + ext);
        export_coefficients(series, ext == ".csv" ? OutputFormat::Csv : OutputFormat::Json, first, "0123");
        save_coefficients(load_coefficients(first), second);
        EXPECT_EQ(read_text_file(first), read_text_file(second)) << ext;
    }
    const auto table = parse_json(format_json(coefficient_table(series, "0123")));
    EXPECT_EQ(table.config_hash, "0123");
    EXPECT_EQ(table.rows.size(), 625u);
    EXPECT_EQ(table.normalization, 0.5);
}

TEST(Export, VectorRows) {
    const auto phi = fixtures::vector();
    const auto series = quantum_theta_series(phi, fixtures::vector_structure(), 1);
    const auto table = coefficient_table(series);
    EXPECT_EQ(table.kind, EmbeddingKind::VectorSpace);
    EXPECT_EQ(table.rows.front().re, 1.0);
}

TEST(Suites, CompatibleDeltaHat) {
    Eigen::Matrix2i m;
    m << 3, 1, 2, 1;
    EmbeddingParams p = fixtures::lattice_params();
    p.m = m;
    p.delta_hat = compatible_delta_hat(m, 0.7);
    const EmbeddingMap phi = build_embedding(p);
    EXPECT_NEAR(commutation_matrix(phi)(2, 3), 0.7, 1e-14);
    m << 1, 2, 2, 4;
    EXPECT_THROW((void)compatible_delta_hat(m, 0.4), Error);
}

TEST(Suites, DefaultFiniteVectorIsNowhereZero) {
    const FiniteVector v = default_finite_vector(2, 5);
    ASSERT_EQ(v.values.size(), 10u);
    for (const auto& x : v.values) EXPECT_GT(std::abs(x), 0.5);
}
