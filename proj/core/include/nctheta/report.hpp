#pragma once

#include "nctheta/config.hpp"
#include "nctheta/quantum_theta.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace nctheta {

inline constexpr const char* kVersion = "0.1.0";

struct RunReport {
    Suite suite = Suite::All;
    nlohmann::json config;
    std::string config_hash;
    std::vector<VerificationReport> checks;
    bool pass = false;
    /// Wall-clock time; never serialized so reports stay byte-identical between runs.
    double elapsed_seconds = 0.0;

    const VerificationReport* find(const std::string& name) const;
};

nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const RunReport& report);

/// One row per check: suite,check,statistic,tolerance,bound,pass.
std::string to_csv(const RunReport& report);

/// Writes the report in the requested format; failures throw IoError.
void write_report(const RunReport& report, OutputFormat format, const std::filesystem::path& path);

/// Formats a double with 17 significant digits ("%.17g").
std::string format_double(double v);

/// Writes a whole file; throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace nctheta
