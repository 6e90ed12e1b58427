#include "nctheta/report.hpp"

#include "nctheta/error.hpp"
#include "nctheta/rng.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nctheta {

using nlohmann::json;

namespace {

json number_or_string(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

}  // namespace

const VerificationReport* RunReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::string format_double(double v) {
    char buf[40];
    if (v == 0.0) v = 0.0;  // drop the sign of zero
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json to_json(const VerificationReport& r) {
    json residuals = json::array();
    for (const auto& [label, value] : r.residuals) residuals.push_back({{"label", label}, {"value", number_or_string(value)}});
    return {
        {"name", r.name},
        {"bound", r.bound == VerificationReport::Bound::AtMost ? "at_most" : "at_least"},
        {"statistic", number_or_string(r.statistic)},
        {"tolerance", r.tolerance},
        {"pass", r.pass},
        {"residuals", residuals},
        {"metadata", r.metadata},
    };
}

json to_json(const RunReport& r) {
    json checks = json::array();
    std::size_t failed = 0;
    for (const auto& c : r.checks) {
        checks.push_back(to_json(c));
        failed += c.pass ? 0 : 1;
    }
    return {
        {"tool", "nctheta"},
        {"version", kVersion},
        {"suite", to_string(r.suite)},
        {"rng", SplitMix64::kName},
        {"config", r.config},
        {"config_hash", r.config_hash},
        {"checks", checks},
        {"summary", {{"pass", r.pass}, {"checks", r.checks.size()}, {"failed", failed}}},
    };
}

std::string to_csv(const RunReport& r) {
    std::ostringstream out;
    out << "suite,check,statistic,tolerance,bound,pass\n";
    for (const auto& c : r.checks) {
        out << to_string(r.suite) << ',' << c.name << ',' << format_double(c.statistic) << ','
            << format_double(c.tolerance) << ',' << (c.bound == VerificationReport::Bound::AtMost ? "at_most" : "at_least")
            << ',' << (c.pass ? "true" : "false") << '\n';
    }
    return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_report(const RunReport& report, OutputFormat format, const std::filesystem::path& path) {
    write_text_file(path, format == OutputFormat::Json ? to_json(report).dump(2) + "\n" : to_csv(report));
}

}  // namespace nctheta
