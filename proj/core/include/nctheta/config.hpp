#pragma once

#include "nctheta/lattice_embedding.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace nctheta {

enum class Suite {
    Validate,
    Commutation,
    Connections,
    Holomorphy,
    NoGo,
    InnerProduct,
    QuantumTheta,
    FunctionalEquation,
    Consistency,
    Additivity,
    OracleCompare,
    All,
};

/// Throws ConfigInvalid for unknown names.
Suite parse_suite(const std::string& name);
std::string to_string(Suite suite);
/// Suites that draw random samples and therefore need a seed.
bool suite_is_randomized(Suite suite);

enum class OutputFormat { Json, Csv };

struct Tolerances {
    double oracle_rel = 1e-8;
    double identity_abs = 1e-12;
    double phase_abs = 1e-9;
};

struct RunConfig {
    EmbeddingParams embedding;
    /// Vector kind: full 2x2 τ. Lattice kind: τ in entry (0,0).
    Eigen::Matrix2cd tau = Eigen::Matrix2cd::Zero();
    std::optional<double> lattice_decay;
    int radius = 4;
    Tolerances tolerances;
    std::optional<std::uint64_t> seed;
    std::string output_path;
    OutputFormat format = OutputFormat::Json;
    /// Finite-difference step of connection and holomorphy checks.
    double fd_step = 1e-3;
};

/// Parses and validates a config document. Schema violations throw ConfigError(ConfigInvalid)
/// carrying the JSON pointer; embedding invariant failures are reported the same way.
RunConfig parse_config(const nlohmann::json& doc);

/// Reads a JSON file: unreadable → IoError, malformed → ConfigSyntax, then parse_config.
RunConfig load_config(const std::filesystem::path& path);

/// Requires a seed for randomized suites (ConfigInvalid at /seed).
void require_seed_if_needed(const RunConfig& config, Suite suite);

/// Canonical JSON form of the effective config (defaults filled, overrides applied).
nlohmann::json to_json(const RunConfig& config);

/// FNV-1a 64 of to_json(config).dump(), as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace nctheta
