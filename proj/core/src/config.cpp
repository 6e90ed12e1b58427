#include "nctheta/config.hpp"

#include "nctheta/error.hpp"
#include "nctheta/rng.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nctheta {

using nlohmann::json;

namespace {

struct SuiteName {
    Suite suite;
    const char* name;
    bool randomized;
};

constexpr std::array<SuiteName, 12> kSuites{{
    {Suite::Validate, "validate", false},
    {Suite::Commutation, "commutation", false},
    {Suite::Connections, "connections", false},
    {Suite::Holomorphy, "holomorphy", false},
    {Suite::NoGo, "nogo", true},
    {Suite::InnerProduct, "inner-product", true},
    {Suite::QuantumTheta, "quantum-theta", true},
    {Suite::FunctionalEquation, "functional-equation", false},
    {Suite::Consistency, "consistency", false},
    {Suite::Additivity, "additivity", true},
    {Suite::OracleCompare, "oracle-compare", false},
    {Suite::All, "all", true},
}};

[[noreturn]] void invalid(const std::string& pointer, const std::string& what) {
    throw ConfigError(ErrorCode::ConfigInvalid, pointer, what);
}

const json& require(const json& obj, const std::string& key, const std::string& base) {
    if (!obj.contains(key)) invalid(base + "/" + key, "required field is missing");
    return obj.at(key);
}

double number(const json& v, const std::string& pointer) {
    if (!v.is_number()) invalid(pointer, "expected a number");
    return v.get<double>();
}

double positive(const json& v, const std::string& pointer) {
    const double x = number(v, pointer);
    if (!(x > 0.0)) invalid(pointer, "must be positive");
    return x;
}

int integer(const json& v, const std::string& pointer) {
    if (!v.is_number_integer()) invalid(pointer, "expected an integer");
    return v.get<int>();
}

/// Complex numbers are [re, im] pairs; plain numbers are real.
std::complex<double> complex_number(const json& v, const std::string& pointer) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        invalid(pointer, "expected a complex number [re, im]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

template <typename F>
void matrix2(const json& v, const std::string& pointer, F&& set) {
    if (!v.is_array() || v.size() != 2) invalid(pointer, "expected a 2x2 matrix");
    for (int i = 0; i < 2; ++i) {
        const json& row = v[static_cast<std::size_t>(i)];
        const std::string rp = pointer + "/" + std::to_string(i);
        if (!row.is_array() || row.size() != 2) invalid(rp, "expected a row of length 2");
        for (int j = 0; j < 2; ++j) set(i, j, row[static_cast<std::size_t>(j)], rp + "/" + std::to_string(j));
    }
}

void check_keys(const json& obj, const std::string& base, std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) invalid(base + "/" + it.key(), "unknown field");
    }
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

}  // namespace

Suite parse_suite(const std::string& name) {
    for (const auto& s : kSuites)
        if (name == s.name) return s.suite;
    invalid("", "unknown suite '" + name + "'");
}

std::string to_string(Suite suite) {
    for (const auto& s : kSuites)
        if (s.suite == suite) return s.name;
    return "unknown";
}

bool suite_is_randomized(Suite suite) {
    for (const auto& s : kSuites)
        if (s.suite == suite) return s.randomized;
    return false;
}

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) invalid("", "config must be a JSON object");
    check_keys(doc, "", {"embedding", "structure", "radius", "tolerances", "seed", "output", "grid"});
    RunConfig cfg;

    const json& emb = require(doc, "embedding", "");
    if (!emb.is_object()) invalid("/embedding", "expected an object");
    check_keys(emb, "/embedding", {"kind", "theta1", "theta2", "m", "delta_hat", "finite_part", "allow_invalid"});
    const json& kind = require(emb, "kind", "/embedding");
    if (kind == "vector") {
        cfg.embedding.kind = EmbeddingKind::VectorSpace;
    } else if (kind == "lattice") {
        cfg.embedding.kind = EmbeddingKind::Lattice;
    } else {
        invalid("/embedding/kind", "expected \"vector\" or \"lattice\"");
    }
    const bool is_vector = cfg.embedding.kind == EmbeddingKind::VectorSpace;
    cfg.embedding.theta1 = number(require(emb, "theta1", "/embedding"), "/embedding/theta1");
    if (is_vector) {
        cfg.embedding.theta2 = number(require(emb, "theta2", "/embedding"), "/embedding/theta2");
        for (const char* k : {"m", "delta_hat"})
            if (emb.contains(k)) invalid(std::string("/embedding/") + k, "only valid for the lattice embedding");
        if (emb.contains("finite_part")) {
            const json& fp = emb["finite_part"];
            const std::string base = "/embedding/finite_part";
            if (!fp.is_object()) invalid(base, "expected an object");
            check_keys(fp, base, {"m1", "m2", "n1", "n2"});
            FinitePart part;
            part.m1 = integer(require(fp, "m1", base), base + "/m1");
            part.m2 = integer(require(fp, "m2", base), base + "/m2");
            part.n1 = integer(require(fp, "n1", base), base + "/n1");
            part.n2 = integer(require(fp, "n2", base), base + "/n2");
            cfg.embedding.finite_part = part;
        }
    } else {
        if (emb.contains("theta2")) invalid("/embedding/theta2", "theta34 is derived for the lattice embedding");
        if (emb.contains("finite_part")) invalid("/embedding/finite_part", "only valid for the vector embedding");
        matrix2(require(emb, "m", "/embedding"), "/embedding/m",
                [&](int i, int j, const json& v, const std::string& p) { cfg.embedding.m(i, j) = integer(v, p); });
        matrix2(require(emb, "delta_hat", "/embedding"), "/embedding/delta_hat",
                [&](int i, int j, const json& v, const std::string& p) { cfg.embedding.delta_hat(i, j) = number(v, p); });
    }
    if (emb.contains("allow_invalid")) {
        if (!emb["allow_invalid"].is_boolean()) invalid("/embedding/allow_invalid", "expected a boolean");
        cfg.embedding.allow_invalid = emb["allow_invalid"].get<bool>();
    }

    const json& st = require(doc, "structure", "");
    if (!st.is_object()) invalid("/structure", "expected an object");
    check_keys(st, "/structure", {"tau", "lattice_decay"});
    const json& tau = require(st, "tau", "/structure");
    if (is_vector) {
        matrix2(tau, "/structure/tau",
                [&](int i, int j, const json& v, const std::string& p) { cfg.tau(i, j) = complex_number(v, p); });
        if (st.contains("lattice_decay")) invalid("/structure/lattice_decay", "only valid for the lattice embedding");
    } else {
        cfg.tau(0, 0) = complex_number(tau, "/structure/tau");
        if (st.contains("lattice_decay")) cfg.lattice_decay = positive(st["lattice_decay"], "/structure/lattice_decay");
    }

    if (doc.contains("radius")) {
        cfg.radius = integer(doc["radius"], "/radius");
        if (cfg.radius < 1) invalid("/radius", "must be >= 1");
    }
    if (doc.contains("tolerances")) {
        const json& tol = doc["tolerances"];
        if (!tol.is_object()) invalid("/tolerances", "expected an object");
        check_keys(tol, "/tolerances", {"oracle_rel", "identity_abs", "phase_abs"});
        if (tol.contains("oracle_rel")) cfg.tolerances.oracle_rel = positive(tol["oracle_rel"], "/tolerances/oracle_rel");
        if (tol.contains("identity_abs"))
            cfg.tolerances.identity_abs = positive(tol["identity_abs"], "/tolerances/identity_abs");
        if (tol.contains("phase_abs")) cfg.tolerances.phase_abs = positive(tol["phase_abs"], "/tolerances/phase_abs");
    }
    if (doc.contains("seed")) {
        const json& s = doc["seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
            invalid("/seed", "expected a non-negative 64-bit integer");
        }
        cfg.seed = s.get<std::uint64_t>();
    }
    if (doc.contains("output")) {
        const json& out = doc["output"];
        if (!out.is_object()) invalid("/output", "expected an object");
        check_keys(out, "/output", {"path", "format"});
        if (out.contains("path")) {
            if (!out["path"].is_string()) invalid("/output/path", "expected a string");
            cfg.output_path = out["path"].get<std::string>();
        }
        if (out.contains("format")) {
            if (out["format"] == "json") {
                cfg.format = OutputFormat::Json;
            } else if (out["format"] == "csv") {
                cfg.format = OutputFormat::Csv;
            } else {
                invalid("/output/format", "expected \"json\" or \"csv\"");
            }
        }
    }
    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        if (!g.is_object()) invalid("/grid", "expected an object");
        check_keys(g, "/grid", {"fd_step"});
        if (g.contains("fd_step")) cfg.fd_step = positive(g["fd_step"], "/grid/fd_step");
    }

    try {
        (void)build_embedding(cfg.embedding);
    } catch (const EmbeddingConditionError& e) {
        invalid("/embedding/delta_hat", "embedding condition violated at column " + std::to_string(e.column()) +
                                            " (" + e.what() + ")");
    } catch (const Error& e) {
        invalid("/embedding", e.what());
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(ErrorCode::ConfigSyntax, "", path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

void require_seed_if_needed(const RunConfig& config, Suite suite) {
    if (suite_is_randomized(suite) && !config.seed) {
        invalid("/seed", "suite '" + to_string(suite) + "' draws random samples and needs a seed");
    }
}

json to_json(const RunConfig& c) {
    json emb;
    emb["kind"] = c.embedding.kind == EmbeddingKind::VectorSpace ? "vector" : "lattice";
    emb["theta1"] = c.embedding.theta1;
    emb["allow_invalid"] = c.embedding.allow_invalid;
    json st;
    if (c.embedding.kind == EmbeddingKind::VectorSpace) {
        emb["theta2"] = c.embedding.theta2;
        if (const auto& fp = c.embedding.finite_part) {
            emb["finite_part"] = {{"m1", fp->m1}, {"m2", fp->m2}, {"n1", fp->n1}, {"n2", fp->n2}};
        }
        json tau = json::array();
        for (int i = 0; i < 2; ++i) tau.push_back({complex_json(c.tau(i, 0)), complex_json(c.tau(i, 1))});
        st["tau"] = tau;
    } else {
        emb["m"] = {{c.embedding.m(0, 0), c.embedding.m(0, 1)}, {c.embedding.m(1, 0), c.embedding.m(1, 1)}};
        emb["delta_hat"] = {{c.embedding.delta_hat(0, 0), c.embedding.delta_hat(0, 1)},
                            {c.embedding.delta_hat(1, 0), c.embedding.delta_hat(1, 1)}};
        st["tau"] = complex_json(c.tau(0, 0));
        if (c.lattice_decay) st["lattice_decay"] = *c.lattice_decay;
    }
    json doc;
    doc["embedding"] = emb;
    doc["structure"] = st;
    doc["radius"] = c.radius;
    doc["tolerances"] = {{"oracle_rel", c.tolerances.oracle_rel},
                         {"identity_abs", c.tolerances.identity_abs},
                         {"phase_abs", c.tolerances.phase_abs}};
    doc["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    doc["grid"] = {{"fd_step", c.fd_step}};
    // The output location does not influence results and is left out of the hash.
    return doc;
}

std::string config_hash(const RunConfig& config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_json(config).dump())));
    return buf;
}

}  // namespace nctheta
