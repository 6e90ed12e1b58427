#pragma once

#include "nctheta/config.hpp"
#include "nctheta/quantum_theta.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace nctheta {

/// One exported coefficient. Vector kind: (w1, w2) = (s1-shift, ŝ1), (m1, m2) = (s2-shift, ŝ2), t = 0.
struct CoefficientRow {
    LatticeIndex k{};
    double w1 = 0, w2 = 0, m1 = 0, m2 = 0, t1 = 0, t2 = 0;
    double re = 0, im = 0;
};

struct CoefficientTable {
    EmbeddingKind kind = EmbeddingKind::Lattice;
    int radius = 0;
    double normalization = 0.0;
    std::string config_hash;
    std::vector<CoefficientRow> rows;  // canonical enumeration order
};

CoefficientTable coefficient_table(const QuantumThetaSeries& series, std::string config_hash = {});

/// Header `k1,k2,k3,k4,w1,w2,m1,m2,t1,t2,re,im`, reals as %.17g.
std::string format_csv(const CoefficientTable& table);
std::string format_json(const CoefficientTable& table);

/// Reloads an export; CSV carries rows only.
CoefficientTable parse_csv(const std::string& text);
CoefficientTable parse_json(const std::string& text);

void export_coefficients(const QuantumThetaSeries& series, OutputFormat format, const std::filesystem::path& path,
                         const std::string& config_hash = {});

/// Format chosen by extension (.csv, otherwise JSON).
CoefficientTable load_coefficients(const std::filesystem::path& path);
void save_coefficients(const CoefficientTable& table, const std::filesystem::path& path);

}  // namespace nctheta
