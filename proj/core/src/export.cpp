#include "nctheta/export.hpp"

#include "nctheta/error.hpp"
#include "nctheta/report.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

namespace nctheta {

using nlohmann::json;

namespace {

constexpr const char* kCsvHeader = "k1,k2,k3,k4,w1,w2,m1,m2,t1,t2,re,im";

double parse_double(const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::IoError, "malformed number '" + s + "' in coefficient file");
    }
}

}  // namespace

CoefficientTable coefficient_table(const QuantumThetaSeries& series, std::string config_hash) {
    CoefficientTable t;
    t.kind = series.embedding.kind();
    t.radius = series.radius;
    t.normalization = series.normalization;
    t.config_hash = std::move(config_hash);
    t.rows.reserve(series.indices.size());
    for (std::size_t i = 0; i < series.indices.size(); ++i) {
        const LatticeElement e = lattice_element(series.embedding, series.indices[i]);
        CoefficientRow r;
        r.k = e.k;
        if (e.kind == EmbeddingKind::Lattice) {
            r.w1 = e.w1();
            r.w2 = e.w2();
            r.m1 = static_cast<double>(e.m1());
            r.m2 = static_cast<double>(e.m2());
            r.t1 = e.t1();
            r.t2 = e.t2();
        } else {
            r.w1 = e.position[0];
            r.w2 = e.dual[0];
            r.m1 = e.position[1];
            r.m2 = e.dual[1];
        }
        r.re = series.coefficients[i].real();
        r.im = series.coefficients[i].imag();
        t.rows.push_back(r);
    }
    return t;
}

std::string format_csv(const CoefficientTable& table) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const auto& r : table.rows) {
        out << r.k[0] << ',' << r.k[1] << ',' << r.k[2] << ',' << r.k[3];
        for (double v : {r.w1, r.w2, r.m1, r.m2, r.t1, r.t2, r.re, r.im}) out << ',' << format_double(v);
        out << '\n';
    }
    return out.str();
}

std::string format_json(const CoefficientTable& table) {
    json rows = json::array();
    for (const auto& r : table.rows) {
        rows.push_back({{"k", r.k}, {"w1", r.w1}, {"w2", r.w2}, {"m1", r.m1}, {"m2", r.m2},
                        {"t1", r.t1}, {"t2", r.t2}, {"re", r.re}, {"im", r.im}});
    }
    json doc = {
        {"kind", to_string(table.kind)},
        {"radius", table.radius},
        {"normalization", table.normalization},
        {"config_hash", table.config_hash},
        {"count", table.rows.size()},
        {"coefficients", rows},
    };
    return doc.dump(1) + "\n";
}

CoefficientTable parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw Error(ErrorCode::IoError, "coefficient CSV header does not match");
    }
    CoefficientTable t;
    int radius = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 12) throw Error(ErrorCode::IoError, "coefficient CSV row needs 12 columns");
        CoefficientRow r;
        for (int i = 0; i < 4; ++i) {
            r.k[static_cast<std::size_t>(i)] = static_cast<int>(parse_double(cells[static_cast<std::size_t>(i)]));
            radius = std::max(radius, std::abs(r.k[static_cast<std::size_t>(i)]));
        }
        double* fields[] = {&r.w1, &r.w2, &r.m1, &r.m2, &r.t1, &r.t2, &r.re, &r.im};
        for (int i = 0; i < 8; ++i) *fields[i] = parse_double(cells[static_cast<std::size_t>(4 + i)]);
        t.rows.push_back(r);
    }
    t.radius = radius;
    return t;
}

CoefficientTable parse_json(const std::string& text) {
    CoefficientTable t;
    try {
        const json doc = json::parse(text);
        const std::string kind = doc.at("kind").get<std::string>();
        t.kind = kind == "vector" ? EmbeddingKind::VectorSpace : EmbeddingKind::Lattice;
        t.radius = doc.at("radius").get<int>();
        t.normalization = doc.at("normalization").get<double>();
        t.config_hash = doc.at("config_hash").get<std::string>();
        for (const auto& r : doc.at("coefficients")) {
            CoefficientRow row;
            row.k = r.at("k").get<LatticeIndex>();
            row.w1 = r.at("w1").get<double>();
            row.w2 = r.at("w2").get<double>();
            row.m1 = r.at("m1").get<double>();
            row.m2 = r.at("m2").get<double>();
            row.t1 = r.at("t1").get<double>();
            row.t2 = r.at("t2").get<double>();
            row.re = r.at("re").get<double>();
            row.im = r.at("im").get<double>();
            t.rows.push_back(row);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::IoError, std::string("malformed coefficient JSON: ") + e.what());
    }
    return t;
}

void export_coefficients(const QuantumThetaSeries& series, OutputFormat format, const std::filesystem::path& path,
                         const std::string& config_hash) {
    const CoefficientTable t = coefficient_table(series, config_hash);
    write_text_file(path, format == OutputFormat::Csv ? format_csv(t) : format_json(t));
}

CoefficientTable load_coefficients(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    return path.extension() == ".csv" ? parse_csv(text) : parse_json(text);
}

void save_coefficients(const CoefficientTable& table, const std::filesystem::path& path) {
    write_text_file(path, path.extension() == ".csv" ? format_csv(table) : format_json(table));
}

}  // namespace nctheta
