#include "nctheta/suites.hpp"

#include "nctheta/error.hpp"
#include "nctheta/parallel.hpp"
#include "nctheta/quantum_theta.hpp"
#include "nctheta/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

namespace nctheta {

using nlohmann::json;
using Bound = VerificationReport::Bound;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
constexpr double kSampleSpacing = 0.05;
constexpr double kCoarseSpacing = 0.25;
constexpr double kHolomorphyTol = 1e-8;
constexpr double kConnectionTol = 1e-6;
constexpr double kVectorIdentityTol = 1e-10;
constexpr double kVectorFunctionalTol = 1e-9;
constexpr double kCocycleOperatorTol = 1e-10;

std::string label(const LatticeIndex& k) {
    std::ostringstream out;
    out << "(" << k[0] << "," << k[1] << "," << k[2] << "," << k[3] << ")";
    return out.str();
}

std::string pair_label(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

/// Tracks the largest value and where it occurred; NaN sticks.
struct MaxTracker {
    double value = 0.0;
    std::string where;
    std::size_t count = 0;

    void add(double v, const std::function<std::string()>& at) {
        ++count;
        if (std::isnan(value)) return;
        if (std::isnan(v) || v > value || count == 1) {
            value = v;
            where = at();
        }
    }
};

struct Context {
    const RunConfig& cfg;
    EmbeddingMap phi;
    ComplexStructure cs;
    std::optional<SplitMix64> rng;
    std::optional<QuantumThetaSeries> series_cache;

    SplitMix64 stream(const std::string& name) const {
        if (!rng) throw ConfigError(ErrorCode::ConfigInvalid, "/seed", "randomized check '" + name + "' needs a seed");
        return rng->split(name);
    }

    const QuantumThetaSeries& series() {
        if (!series_cache) series_cache = quantum_theta_series(phi, cs, cfg.radius);
        return *series_cache;
    }

    bool vector() const { return phi.kind() == EmbeddingKind::VectorSpace; }
};

/// Runs body into a fresh report; module errors turn into a failed check with the message recorded.
VerificationReport run_check(const std::string& name, double tolerance, Bound bound,
                             const std::function<void(VerificationReport&)>& body) {
    VerificationReport r;
    r.name = name;
    r.tolerance = tolerance;
    r.bound = bound;
    try {
        body(r);
        r.finalize();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        r.residuals.clear();
        r.metadata["error"] = e.what();
        r.metadata["error_code"] = std::string(to_string(e.code()));
        r.statistic = std::numeric_limits<double>::quiet_NaN();
        r.pass = false;
    }
    return r;
}

LatticeIndex random_index(SplitMix64& rng, int radius) {
    LatticeIndex k{};
    for (auto& v : k) v = rng.uniform_int(-radius, radius);
    return k;
}

/// Sampled version of f when every generator shift fits the grid; nullopt otherwise.
std::optional<SampledVector> sampled_if_compatible(const EmbeddingMap& phi, const GaussianVector& f,
                                                   const GridSpec& grid) {
    for (int j = 1; j <= 4; ++j) {
        const LatticeElement e = lattice_element(phi, unit_index(j));
        for (int a = 0; a < f.continuous_dim(); ++a) {
            const double cells = e.position[static_cast<std::size_t>(a)] / grid.spacing;
            if (std::abs(cells - std::round(cells)) > 1e-9 * std::max(1.0, std::abs(cells))) return std::nullopt;
        }
    }
    return sample(f, grid);
}

// ---------------------------------------------------------------------------------------------

void suite_validate(Context& ctx, std::vector<VerificationReport>& out) {
    const auto& phi = ctx.phi;
    const double tol = ctx.cfg.tolerances.identity_abs;

    out.push_back(run_check("embedding_column_condition", tol, Bound::AtMost, [&](VerificationReport& r) {
        for (int j = 0; j < 4; ++j) r.add("column " + std::to_string(j + 1), std::abs(phi.column_condition(j)));
        r.metadata["kind"] = to_string(phi.kind());
    }));

    out.push_back(run_check("deformation_matrix", tol, Bound::AtMost, [&](VerificationReport& r) {
        const DeformationMatrix d = commutation_matrix(phi);
        r.add("antisymmetry", (d.theta + d.theta.transpose()).cwiseAbs().maxCoeff());
        r.metadata["theta12"] = d(0, 1);
        r.metadata["theta34"] = d(2, 3);
    }));

    const auto r1 = enumerate_lattice(phi, 1);
    const auto r2 = enumerate_lattice(phi, 2);

    out.push_back(run_check("lattice_linearity", tol, Bound::AtMost, [&](VerificationReport& r) {
        MaxTracker worst;
        for (const auto& a : r2)
            for (const auto& b : r1) {
                const LatticeElement sum = a + b;
                const LatticeElement direct = lattice_element(phi, a.k + b.k);
                double d = 0.0;
                for (int i = 0; i < 3; ++i) {
                    d = std::max(d, std::abs(sum.position[i] - direct.position[i]));
                    d = std::max(d, std::abs(sum.dual[i] - direct.dual[i]));
                }
                worst.add(d, [&] { return label(a.k) + "+" + label(b.k); });
            }
        r.add("max", worst.value);
        r.metadata["pairs"] = worst.count;
    }));

    out.push_back(run_check("cocycle_bicharacter", tol, Bound::AtMost, [&](VerificationReport& r) {
        MaxTracker left;
        MaxTracker right;
        for (const auto& x : r1)
            for (const auto& xp : r1)
                for (const auto& y : r1) {
                    left.add(std::abs(cocycle_alpha(x + xp, y) - cocycle_alpha(x, y) * cocycle_alpha(xp, y)),
                             [] { return std::string(); });
                    right.add(std::abs(cocycle_alpha(y, x + xp) - cocycle_alpha(y, x) * cocycle_alpha(y, xp)),
                              [] { return std::string(); });
                }
        r.add("first argument", left.value);
        r.add("second argument", right.value);
        r.metadata["triples"] = left.count;
    }));

    out.push_back(run_check("cocycle_identity", tol, Bound::AtMost, [&](VerificationReport& r) {
        // All radius-2 pairs (g, h) against every unit direction k, plus all radius-1 triples.
        std::vector<LatticeElement> units;
        for (int j = 1; j <= 4; ++j) {
            units.push_back(lattice_element(phi, unit_index(j)));
            units.push_back(-units.back());
        }
        units.push_back(lattice_element(phi, {0, 0, 0, 0}));
        MaxTracker worst;
        auto check = [&](const LatticeElement& g, const LatticeElement& h, const LatticeElement& k) {
            const cplx lhs = cocycle_alpha(g, h) * cocycle_alpha(g + h, k);
            const cplx rhs = cocycle_alpha(h, k) * cocycle_alpha(g, h + k);
            worst.add(std::abs(lhs - rhs), [] { return std::string(); });
        };
        for (const auto& g : r2)
            for (const auto& h : r2)
                for (const auto& k : units) check(g, h, k);
        for (const auto& g : r1)
            for (const auto& h : r1)
                for (const auto& k : r1) check(g, h, k);
        r.add("max", worst.value);
        r.metadata["triples"] = worst.count;
        r.metadata["antisymmetry"] = [&] {
            double a = 0.0;
            for (const auto& g : r1)
                for (const auto& h : r1) a = std::max(a, std::abs(cocycle_alpha(g, h) * cocycle_alpha(h, g) - 1.0));
            return a;
        }();
    }));

    out.push_back(run_check("cocycle_operator_oracle", kCocycleOperatorTol, Bound::AtMost, [&](VerificationReport& r) {
        // π_g π_h f = α(g, h) π_{g+h} f on 20 fixed radius-1 pairs.
        const GaussianVector f = test_vector(phi, ctx.cs);
        const GridSpec grid = default_grid(f, kSampleSpacing);
        const auto sampled = sampled_if_compatible(phi, f, grid);
        r.metadata["representation"] = sampled ? "sampled" : "closed-form";
        double fmax = 0.0;
        const int m1 = f.finite ? f.finite->m1 : 1;
        const int m2 = f.finite ? f.finite->m2 : 1;
        for_each_grid_point(phi.kind(), grid, [&](const ModulePoint& x) { fmax = std::max(fmax, std::abs(f(x))); },
                            0, 0, m1, m2);
        for (int i = 0; i < 20; ++i) {
            const LatticeElement& g = r1[static_cast<std::size_t>((7 * i + 1) % 81)];
            const LatticeElement& h = r1[static_cast<std::size_t>((13 * i + 5) % 81)];
            const cplx alpha = cocycle_alpha(g, h);
            double worst = 0.0;
            if (sampled) {
                const SampledVector lhs = apply_pi(g, apply_pi(h, *sampled));
                const SampledVector rhs = apply_pi(g + h, *sampled);
                for (std::size_t p = 0; p < lhs.size(); ++p)
                    worst = std::max(worst, std::abs(lhs.values()[p] - alpha * rhs.values()[p]));
            } else {
                const GaussianVector lhs = apply_pi(g, apply_pi(h, f));
                const GaussianVector rhs = apply_pi(g + h, f);
                for_each_grid_point(phi.kind(), grid, [&](const ModulePoint& x) {
                    worst = std::max(worst, std::abs(lhs(x) - alpha * rhs(x)));
                }, 0, 0, m1, m2);
            }
            r.add(label(g.k) + "," + label(h.k), worst / fmax);
        }
    }));
}

void suite_commutation(Context& ctx, std::vector<VerificationReport>& out) {
    const auto& phi = ctx.phi;
    const DeformationMatrix theta = commutation_matrix(phi);
    const GaussianVector f = test_vector(phi, ctx.cs);

    auto expected = [&](int i, int j) { return std::exp(2.0 * kPi * kI * theta(i - 1, j - 1)); };
    auto meta = [&](VerificationReport& r) {
        r.metadata["theta12"] = theta(0, 1);
        r.metadata["theta34"] = theta(2, 3);
        r.metadata["finite_part"] = phi.has_finite_part();
    };

    out.push_back(run_check("commutation_phase_sampled", ctx.cfg.tolerances.phase_abs, Bound::AtMost,
                            [&](VerificationReport& r) {
        meta(r);
        const GridSpec grid = default_grid(f, kSampleSpacing);
        const auto sampled = sampled_if_compatible(phi, f, grid);
        r.metadata["representation"] = sampled ? "sampled" : "closed-form";
        r.metadata["spacing"] = grid.spacing;
        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j <= 4; ++j) {
                const cplx measured = sampled ? measure_commutation_phase(phi, i, j, *sampled)
                                              : measure_commutation_phase(phi, i, j, f, grid);
                r.add(pair_label(i, j), std::abs(measured - expected(i, j)));
            }
    }));

    out.push_back(run_check("commutation_phase_closed_form", ctx.cfg.tolerances.phase_abs, Bound::AtMost,
                            [&](VerificationReport& r) {
        meta(r);
        const GridSpec grid = default_grid(f, kCoarseSpacing);
        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j <= 4; ++j)
                r.add(pair_label(i, j), std::abs(measure_commutation_phase(phi, i, j, f, grid) - expected(i, j)));
    }));
}

void suite_connections(Context& ctx, std::vector<VerificationReport>& out) {
    const auto& phi = ctx.phi;
    const GaussianVector f = test_vector(phi, ctx.cs);
    const ResidualGrid rg{default_grid(f, kCoarseSpacing), ctx.cfg.fd_step};

    out.push_back(run_check("connection_commutator", kConnectionTol, Bound::AtMost, [&](VerificationReport& r) {
        r.metadata["fd_step"] = rg.fd_step;
        r.metadata["sample_spacing"] = rg.grid.spacing;
        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j <= 4; ++j) r.add(pair_label(i, j), connection_commutator_residual(phi, i, j, f, rg));
    }));

    // Fourth-order differences: halving the step should shrink the residual by about 16.
    out.push_back(run_check("connection_refinement", 8.0, Bound::AtLeast, [&](VerificationReport& r) {
        const std::vector<std::pair<int, int>> pairs =
            ctx.vector() ? std::vector<std::pair<int, int>>{{2, 2}, {4, 4}} : std::vector<std::pair<int, int>>{{2, 2}};
        const std::array<double, 3> steps{0.08, 0.04, 0.02};
        json study = json::array();
        for (const auto& [i, j] : pairs) {
            std::array<double, 3> res{};
            for (std::size_t s = 0; s < steps.size(); ++s) {
                res[s] = connection_commutator_residual(phi, i, j, f, ResidualGrid{rg.grid, steps[s]});
            }
            study.push_back({{"pair", {i, j}}, {"steps", steps}, {"residuals", res}});
            r.add(pair_label(i, j) + " 0.08/0.04", res[0] / res[1]);
            r.add(pair_label(i, j) + " 0.04/0.02", res[1] / res[2]);
        }
        r.metadata["study"] = study;
    }));
}

void suite_holomorphy(Context& ctx, std::vector<VerificationReport>& out) {
    const auto& phi = ctx.phi;
    const GaussianVector f = theta_vector(ctx.cs);
    const GridSpec grid = default_grid(f, 0.1);
    const ResidualGrid rg{grid, ctx.cfg.fd_step};

    out.push_back(run_check("theta_vector_holomorphy", kHolomorphyTol, Bound::AtMost, [&](VerificationReport& r) {
        r.add("residual", holomorphy_residual(f, ctx.cs, phi, rg));
        r.metadata["equations"] = ctx.vector() ? 2 : 1;
        r.metadata["fd_step"] = rg.fd_step;
    }));

    out.push_back(run_check("holomorphy_negative_control", 0.1, Bound::AtLeast, [&](VerificationReport& r) {
        GaussianVector wrong = f;
        wrong.quadratic(0, 0) += 1.0;  // no longer solves the first equation
        r.add("residual", holomorphy_residual(wrong, ctx.cs, phi, rg));
    }));

    if (!ctx.vector()) {
        out.push_back(run_check("lattice_directions_not_holomorphic", 0.01, Bound::AtLeast, [&](VerificationReport& r) {
            // Unit combinations c3∇3 + c4∇4 with c = (cos a, e^{iφ} sin a).
            const GridSpec coarse = default_grid(f, kCoarseSpacing);
            double lowest = std::numeric_limits<double>::infinity();
            json where;
            for (int a = 0; a < 16; ++a)
                for (int p = 0; p < 8; ++p) {
                    const double angle = kPi * a / 16.0;
                    const cplx c3 = std::cos(angle);
                    const cplx c4 = std::polar(std::sin(angle), kPi * p / 4.0);
                    const double v = lattice_direction_residual(f, phi, c3, c4, coarse);
                    if (v < lowest) {
                        lowest = v;
                        where = {angle, kPi * p / 4.0};
                    }
                }
            r.add("min over 128 combinations", lowest);
            r.metadata["argmin_angle_phase"] = where;
        }));
    }

    if (ctx.vector()) return;
    out.push_back(run_check("theta_vector_lattice_tail", ctx.cfg.tolerances.identity_abs, Bound::AtMost,
                            [&](VerificationReport& r) {
        // Relative mass of |f|² outside the sampled window in the integer directions.
        const double c = std::get<PartialT>(ctx.cs).lattice_decay;
        const int w = grid.window;
        double inside = 0.0;
        double outside = 0.0;
        for (int n = -w - 40; n <= w + 40; ++n) {
            const double t = std::exp(-2.0 * kPi * c * n * n);
            (std::abs(n) <= w ? inside : outside) += t;
        }
        const double total = inside + outside;
        r.add("tail", (total * total - inside * inside) / (total * total));
        r.metadata["window"] = w;
    }));
}

void suite_nogo(Context& ctx, std::vector<VerificationReport>& out) {
    const std::array<Eigen::Matrix2i, 5> ms = [] {
        std::array<Eigen::Matrix2i, 5> a;
        a[0] << 1, 0, 0, 1;
        a[1] << 2, 1, 1, 1;
        a[2] << 1, 2, 0, 1;
        a[3] << 3, 1, 2, 1;
        a[4] << 1, 0, 1, -2;
        return a;
    }();
    const double theta1 = ctx.cfg.embedding.theta1;

    out.push_back(run_check("nogo_certificate", 0.0, Bound::AtMost, [&](VerificationReport& r) {
        SplitMix64 rng = ctx.stream("nogo");
        std::size_t certified = 0;
        json sample;
        for (int t = 0; t < 20; ++t) {
            Eigen::Matrix2cd tau;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    cplx z;
                    do {
                        z = cplx(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
                    } while (std::abs(z) < 0.1);
                    tau(i, j) = z;
                }
            for (const auto& m : ms) {
                EmbeddingParams p;
                p.kind = EmbeddingKind::Lattice;
                p.theta1 = theta1;
                p.m = m;
                p.delta_hat = compatible_delta_hat(m, 0.4);
                const EmbeddingMap phi = build_embedding(p);
                const InfeasibilityCertificate cert = holomorphic_feasibility(phi, tau);
                double b_rel = 0.0;
                for (std::size_t k = 1; k < cert.relations.size(); ++k) b_rel = std::max(b_rel, cert.relations[k].numeric_residual);
                // 0 when the determinant cancels exactly and the contradiction with det(m) != 0 stands.
                r.add("tau#" + std::to_string(t) + " m=" + std::to_string(m(0, 0)) + std::to_string(m(0, 1)) +
                          std::to_string(m(1, 0)) + std::to_string(m(1, 1)),
                      cert.infeasible ? 0.0 : 1.0);
                certified += cert.infeasible ? 1 : 0;
                if (sample.is_null()) {
                    sample = {{"trace", cert.trace},
                              {"determinant", cert.determinant.to_string(nogo_variable_names())},
                              {"b_relation_residual", b_rel}};
                }
            }
        }
        r.metadata["certified"] = certified;
        r.metadata["example"] = sample;
    }));

    out.push_back(run_check("nogo_degenerate_tau", 0.0, Bound::AtMost, [&](VerificationReport& r) {
        EmbeddingParams p;
        p.kind = EmbeddingKind::Lattice;
        p.theta1 = theta1;
        p.m = ms[0];
        p.delta_hat = compatible_delta_hat(ms[0], 0.4);
        Eigen::Matrix2cd tau;
        tau << cplx(1, 1), 0.0, 3.0, cplx(3, -3);
        try {
            (void)holomorphic_feasibility(build_embedding(p), tau);
            r.add("tau12 = 0", 1.0);
        } catch (const Error& e) {
            r.add("tau12 = 0", e.code() == ErrorCode::DegenerateTau ? 0.0 : 1.0);
            r.metadata["error_code"] = std::string(to_string(e.code()));
        }
    }));
}

double relative_gap(cplx a, cplx b, double floor_abs, double rel) {
    // Passes (<= rel) when |a − b| <= max(rel·|b|, floor_abs).
    const double diff = std::abs(a - b);
    return diff / std::max(std::abs(b), floor_abs / rel);
}

void suite_inner_product(Context& ctx, std::vector<VerificationReport>& out) {
    const auto& phi = ctx.phi;
    const GaussianVector f = theta_vector(ctx.cs);
    const double rel = ctx.cfg.tolerances.oracle_rel;

    out.push_back(run_check("inner_product_closed_vs_oracle", rel, Bound::AtMost, [&](VerificationReport& r) {
        SplitMix64 rng = ctx.stream("inner-product");
        std::vector<LatticeIndex> ks{{0, 0, 0, 0}, unit_index(1), unit_index(2), unit_index(3), unit_index(4)};
        for (int i = 0; i < 10; ++i) ks.push_back(random_index(rng, 2));
        for (const auto& k : ks) {
            const LatticeElement h = lattice_element(phi, k);
            const cplx closed = inner_product_closed(ctx.cs, f, h);
            const cplx oracle = inner_product_oracle(f, h);
            r.add(label(k), relative_gap(closed, oracle, 1e-15, rel));
        }
        const cplx zero = inner_product_closed(ctx.cs, f, lattice_element(phi, {0, 0, 0, 0}));
        r.metadata["norm_squared"] = zero.real();
    }));

    if (!ctx.vector()) {
        out.push_back(run_check("inner_product_large_m", 1e-6, Bound::AtMost, [&](VerificationReport& r) {
            // Index whose image has |m| = 3: solve m·(k3, k4) = (3, 0).
            const Eigen::Matrix2d b = phi.inverse_m();
            const Eigen::Vector2d kk = b * Eigen::Vector2d(3.0, 0.0);
            LatticeIndex k{0, 0, static_cast<int>(std::lround(kk(0))), static_cast<int>(std::lround(kk(1)))};
            const LatticeElement h = lattice_element(phi, k);
            const cplx closed = inner_product_closed(ctx.cs, f, h);
            const cplx oracle = inner_product_oracle(f, h);
            r.add("relative", std::abs(closed - oracle) / std::abs(oracle));
            r.add("closed below 1e-9", std::abs(closed) < 1e-9 ? 0.0 : 1.0);
            r.add("oracle below 1e-9", std::abs(oracle) < 1e-9 ? 0.0 : 1.0);
            r.metadata["k"] = k;
            r.metadata["m"] = {h.m1(), h.m2()};
            r.metadata["closed"] = std::abs(closed);
        }));
    }

    out.push_back(run_check("inner_product_conjugate_symmetry", rel, Bound::AtMost, [&](VerificationReport& r) {
        // π_{−h} = α(h, −h)^{-1} π_h^{-1} with α(h, −h) = 1, so ⟨f, π_{−h} f⟩ = conj⟨f, π_h f⟩.
        SplitMix64 rng = ctx.stream("inner-product-symmetry");
        for (int i = 0; i < 8; ++i) {
            const LatticeElement h = lattice_element(phi, random_index(rng, 2));
            const cplx alpha = cocycle_alpha(h, -h);
            const cplx plus = inner_product_oracle(f, h);
            const cplx minus = inner_product_oracle(f, -h);
            r.add(label(h.k), relative_gap(minus, std::conj(plus) / alpha, 1e-15, rel));
        }
    }));
}

void suite_quantum_theta(Context& ctx, std::vector<VerificationReport>& out) {
    const double tol = ctx.cfg.tolerances.identity_abs;

    out.push_back(run_check("completed_square_lemma", tol, Bound::AtMost, [&](VerificationReport& r) {
        // C̃ − q(λ) = H(w̲, w̲)/2 for 100 random w across 10 random scalar T.
        SplitMix64 rng = ctx.stream("lemma");
        MaxTracker worst;
        for (int t = 0; t < 10; ++t) {
            const cplx tt(rng.uniform(-1.0, 1.0), rng.uniform(0.2, 5.0));
            const HermitianFormContext form = HermitianFormContext::scalar(tt);
            for (int i = 0; i < 10; ++i) {
                const ContinuousPart w = ContinuousPart::scalar(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
                const cplx lhs = completed_square_constant(form, w);
                const cplx rhs = 0.5 * hermitian_form(form, w, w);
                worst.add(std::abs(lhs - rhs), [&] { return std::to_string(t) + ":" + std::to_string(i); });
            }
        }
        r.add("max over 100 samples", worst.value);
        r.metadata["samples"] = worst.count;
    }));

    out.push_back(run_check("jacobi_theta_identities", 1e-10, Bound::AtMost, [&](VerificationReport& r) {
        SplitMix64 rng = ctx.stream("theta");
        double period = 0.0;
        double quasi = 0.0;
        double even = 0.0;
        for (int i = 0; i < 50; ++i) {
            const cplx tau(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 3.0));
            const cplx z(rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 0.5));
            const cplx base = jacobi_theta({tau, z}).value;
            const double scale = std::abs(base);
            period = std::max(period, std::abs(jacobi_theta({tau, z + 1.0}).value - base) / scale);
            const cplx shifted = jacobi_theta({tau, z + tau}).value;
            quasi = std::max(quasi, std::abs(shifted - std::exp(-kPi * kI * tau - 2.0 * kPi * kI * z) * base) /
                                        std::abs(shifted));
            even = std::max(even, std::abs(jacobi_theta({tau, -z}).value - base) / scale);
        }
        // Plain partial sum over |n| <= 20 as the reference at τ = i.
        double naive = 0.0;
        for (int n = 20; n >= 1; --n) naive += 2.0 * std::exp(-kPi * n * n);
        naive += 1.0;
        const cplx at_i = jacobi_theta({cplx(0.0, 1.0), 0.0}).value;
        r.add("z -> z+1", period);
        r.add("z -> z+tau", quasi);
        r.add("z -> -z", even);
        r.add("theta(i,0) vs partial sum", std::abs(at_i - naive));
        r.metadata["theta_i_0"] = at_i.real();
    }));

    out.push_back(run_check("series_coefficient_at_zero", tol, Bound::AtMost, [&](VerificationReport& r) {
        const auto& s = ctx.series();
        const cplx c0 = s.coefficient({0, 0, 0, 0});
        if (ctx.vector()) {
            r.add("C_0 - 1", std::abs(c0 - 1.0));
        } else {
            const double c = std::get<PartialT>(ctx.cs).lattice_decay;
            const double th = jacobi_theta({cplx(0.0, 2.0 * c), 0.0}).value.real();
            r.add("C_0 - theta^2", std::abs(c0 - th * th));
            r.add("Im C_0", std::abs(c0.imag()));
        }
        r.metadata["c0"] = {c0.real(), c0.imag()};
    }));

    out.push_back(run_check("series_reassembly", tol, Bound::AtMost, [&](VerificationReport& r) {
        const auto& s = ctx.series();
        r.add("normalization*coefficient - inner product", s.reassembly_deviation);
        r.metadata["normalization"] = s.normalization;
        r.metadata["radius"] = s.radius;
        r.metadata["coefficients"] = s.coefficients.size();
        r.metadata["tail_bound"] = s.tail_bound;
        try {
            r.metadata["radius_for_tail_1e-12"] = radius_for_tail(ctx.phi, ctx.cs, 1e-12);
        } catch (const Error&) {
            r.metadata["radius_for_tail_1e-12"] = nullptr;
        }
    }));

    out.push_back(run_check("c_factor_matches_series", tol, Bound::AtMost, [&](VerificationReport& r) {
        const auto& s = ctx.series();
        SplitMix64 rng = ctx.stream("quantum-theta");
        MaxTracker worst;
        for (int i = 0; i < 50; ++i) {
            const LatticeIndex k = random_index(rng, s.radius);
            worst.add(std::abs(c_factor(s, lattice_element(ctx.phi, k)) - s.coefficient(k)), [&] { return label(k); });
        }
        r.add("max", worst.value);
    }));

    out.push_back(run_check("coefficient_decay_bound", 1e-12, Bound::AtMost, [&](VerificationReport& r) {
        // |C_k| <= A exp(−(π/2) kᵗGk) for every stored coefficient; records the excess above the bound.
        const auto& s = ctx.series();
        const DecayBound b = coefficient_decay(ctx.phi, ctx.cs);
        double excess = 0.0;
        for (std::size_t i = 0; i < s.indices.size(); ++i) {
            double k2 = 0.0;
            for (int v : s.indices[i]) k2 += double(v) * v;
            const double bound = b.prefactor * std::exp(-0.5 * kPi * b.lambda_min * k2);
            excess = std::max(excess, std::abs(s.coefficients[i]) / bound - 1.0);
        }
        r.add("excess over bound", std::max(0.0, excess));
        r.metadata["lambda_min"] = b.lambda_min;
        r.metadata["prefactor"] = b.prefactor;
    }));

    out.push_back(run_check("coefficient_decay_fit", std::numeric_limits<double>::min(), Bound::AtLeast,
                            [&](VerificationReport& r) {
        // Least-squares slope of log|C_k| against |k|² over ‖k‖∞ <= 2.
        const auto& s = ctx.series();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < s.indices.size() && sup_norm(s.indices[i]) <= 2; ++i) {
            const double a = std::abs(s.coefficients[i]);
            if (a == 0.0) continue;
            double k2 = 0.0;
            for (int v : s.indices[i]) k2 += double(v) * v;
            const double y = std::log(a);
            sx += k2;
            sy += y;
            sxx += k2 * k2;
            sxy += k2 * y;
            ++n;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        r.add("decay constant", -slope);
    }));
}

std::vector<LatticeIndex> translation_set(int radius) {
    std::vector<LatticeIndex> gs{{0, 0, 0, 0}};
    for (int j = 1; j <= 4; ++j) {
        gs.push_back(unit_index(j));
        LatticeIndex neg{};
        neg[static_cast<std::size_t>(j - 1)] = -1;
        gs.push_back(neg);
    }
    gs.push_back({1, 1, 0, 0});
    gs.push_back({0, 0, 1, 1});
    gs.push_back({1, -1, 1, -1});
    if (radius >= 4) {
        gs.push_back({2, 0, 0, 0});
        gs.push_back({0, 2, -1, 0});
        gs.push_back({1, 0, 2, -2});
    }
    std::vector<LatticeIndex> out;
    for (const auto& g : gs)
        if (2 * sup_norm(g) <= radius) out.push_back(g);
    return out;
}

void suite_functional_equation(Context& ctx, std::vector<VerificationReport>& out) {
    const double tol = ctx.vector() ? kVectorFunctionalTol : ctx.cfg.tolerances.identity_abs;
    out.push_back(run_check("functional_equation", tol, Bound::AtMost, [&](VerificationReport& r) {
        const auto& s = ctx.series();
        json counts = json::object();
        for (const auto& g : translation_set(s.radius)) {
            const VerificationReport one = verify_functional_equation(s, lattice_element(ctx.phi, g), tol);
            r.add(label(g), one.statistic);
            counts[label(g)] = one.metadata["interior_coefficients"];
        }
        r.metadata["interior_coefficients"] = counts;
        r.metadata["translation"] = ctx.vector() ? "exp(-pi H(g,h))" : "quotient";
        if (!ctx.vector()) {
            // Translation by zero rescales by 1/C_0 in the lattice case.
            const cplx t0 = translation_factor(s, lattice_element(ctx.phi, {0, 0, 0, 0}),
                                               lattice_element(ctx.phi, unit_index(3)));
            r.metadata["zero_translation_factor"] = t0.real();
        }
    }));
}

void suite_consistency(Context& ctx, std::vector<VerificationReport>& out) {
    const double tol = ctx.vector() ? kVectorIdentityTol : ctx.cfg.tolerances.identity_abs;
    const auto r1 = enumerate_lattice(ctx.phi, 1);

    out.push_back(run_check("consistency_condition", tol, Bound::AtMost, [&](VerificationReport& r) {
        const auto& s = ctx.series();
        MaxTracker quotient;
        for (const auto& g : r1)
            for (const auto& h : r1) {
                const VerificationReport one = verify_consistency_condition(s, g, h, tol);
                quotient.add(one.statistic, [&] { return label(g.k) + "," + label(h.k); });
            }
        r.add("max over radius-1 pairs", quotient.value);
        r.metadata["identities"] = ctx.vector() ? "quotient, manin" : "quotient";
        r.metadata["pairs"] = quotient.count;
        r.metadata["argmax"] = quotient.where;
    }));

    if (ctx.vector()) {
        out.push_back(run_check("manin_identity", kVectorIdentityTol, Bound::AtMost, [&](VerificationReport& r) {
            // exp(πi Im H(g̲, h̲)) = α(g, h) on every radius-2 pair.
            const auto r2 = enumerate_lattice(ctx.phi, 2);
            const HermitianFormContext form = form_context(ctx.cs);
            std::vector<double> worst(r2.size(), 0.0);
            parallel_for(r2.size(), [&](std::size_t i) {
                const auto& g = r2[i];
                ContinuousPart gp;
                gp.first << g.position[0], g.position[1];
                gp.second << g.dual[0], g.dual[1];
                double w = 0.0;
                for (const auto& h : r2) {
                    ContinuousPart hp;
                    hp.first << h.position[0], h.position[1];
                    hp.second << h.dual[0], h.dual[1];
                    const double im = hermitian_form(form, gp, hp).imag();
                    w = std::max(w, std::abs(std::exp(kI * kPi * im) - cocycle_alpha(g, h)));
                }
                worst[i] = w;
            });
            r.add("max over radius-2 pairs", *std::max_element(worst.begin(), worst.end()));
            r.metadata["pairs"] = r2.size() * r2.size();
        }));
    }
}

void suite_additivity(Context& ctx, std::vector<VerificationReport>& out) {
    const auto& phi = ctx.phi;
    if (ctx.vector()) {
        out.push_back(run_check("additivity_vector", ctx.cfg.tolerances.identity_abs, Bound::AtMost,
                                [&](VerificationReport& r) {
            const auto& s = ctx.series();
            SplitMix64 rng = ctx.stream("additivity");
            MaxTracker worst;
            for (int i = 0; i < 100; ++i) {
                const LatticeElement g1 = lattice_element(phi, random_index(rng, 2));
                const LatticeElement g2 = lattice_element(phi, random_index(rng, 2));
                const LatticeElement h = lattice_element(phi, random_index(rng, 2));
                worst.add(additivity_gap(s, g1, g2, h), [&] { return label(g1.k) + label(g2.k) + label(h.k); });
            }
            r.add("max over 100 triples", worst.value);
            r.metadata["argmax"] = worst.where;
        }));
        return;
    }

    out.push_back(run_check("additivity_lattice_witness", 0.01, Bound::AtLeast, [&](VerificationReport& r) {
        const auto& s = ctx.series();
        const LatticeElement g = lattice_element(phi, unit_index(3));
        const LatticeElement h = lattice_element(phi, unit_index(4));
        const double gap = additivity_gap(s, g, g, h);
        r.add("g1=g2=e3, h=e4", gap);
        r.metadata["gap"] = gap;
        r.metadata["g1"] = g.k;
        r.metadata["g2"] = g.k;
        r.metadata["h"] = h.k;
    }));

    out.push_back(run_check("additivity_lattice_survey", 0.0, Bound::AtLeast, [&](VerificationReport& r) {
        // Measurement only: gap statistics for random triples and for pure continuous directions.
        const auto& s = ctx.series();
        SplitMix64 rng = ctx.stream("additivity");
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (int i = 0; i < 100; ++i) {
            const LatticeElement g1 = lattice_element(phi, random_index(rng, 1));
            const LatticeElement g2 = lattice_element(phi, random_index(rng, 1));
            const LatticeElement h = lattice_element(phi, random_index(rng, 2));
            const double gap = additivity_gap(s, g1, g2, h);
            lo = std::min(lo, gap);
            hi = std::max(hi, gap);
        }
        double pure = 0.0;
        for (const auto& g1 : {LatticeIndex{1, 0, 0, 0}, LatticeIndex{0, 1, 0, 0}, LatticeIndex{1, 1, 0, 0}})
            for (const auto& g2 : {LatticeIndex{1, 0, 0, 0}, LatticeIndex{0, 1, 0, 0}, LatticeIndex{-1, 1, 0, 0}})
                for (const auto& h : enumerate_indices(1))
                    pure = std::max(pure, additivity_gap(s, lattice_element(phi, g1), lattice_element(phi, g2),
                                                         lattice_element(phi, h)));
        r.add("random min gap", lo);
        r.metadata["random_max_gap"] = hi;
        r.metadata["pure_continuous_max_gap"] = pure;
    }));
}

void suite_oracle_compare(Context& ctx, std::vector<VerificationReport>& out) {
    const double rel = ctx.cfg.tolerances.oracle_rel;
    out.push_back(run_check("oracle_equivalence", rel, Bound::AtMost, [&](VerificationReport& r) {
        const auto indices = enumerate_indices(2);
        const GaussianVector f = theta_vector(ctx.cs);
        const QuantumThetaSeries s = quantum_theta_series(ctx.phi, ctx.cs, 2);
        std::vector<double> gaps(indices.size(), 0.0);
        parallel_for(indices.size(), [&](std::size_t i) {
            const LatticeElement h = lattice_element(ctx.phi, indices[i]);
            const cplx closed = s.normalization * s.coefficients[i];
            gaps[i] = relative_gap(closed, inner_product_oracle(f, h), 1e-15, rel);
        });
        std::size_t arg = 0;
        for (std::size_t i = 0; i < gaps.size(); ++i)
            if (gaps[i] > gaps[arg]) arg = i;
        r.add("max relative error over radius-2 indices", gaps[arg]);
        r.metadata["indices"] = indices.size();
        r.metadata["argmax"] = label(indices[arg]);
        r.metadata["floor_abs"] = 1e-15;
    }));
}

}  // namespace

Eigen::Matrix2d compatible_delta_hat(const Eigen::Matrix2i& m, double theta34) {
    const double det = static_cast<double>(m(0, 0)) * m(1, 1) - static_cast<double>(m(0, 1)) * m(1, 0);
    if (det == 0.0) throw Error(ErrorCode::SingularIntegerMatrix, "det(m) = 0");
    // Columns (δ11, δ21) ∝ (m21, −m11) and (δ12, δ22) ∝ (m22, −m12); θ34 = (r + s) det(m).
    const double r = 0.5 * theta34 / det;
    Eigen::Matrix2d d;
    d << r * m(1, 0), r * m(1, 1), -r * m(0, 0), -r * m(0, 1);
    return d;
}

FiniteVector default_finite_vector(int m1, int m2) {
    FiniteVector v;
    v.m1 = m1;
    v.m2 = m2;
    v.values.resize(static_cast<std::size_t>(m1) * m2);
    for (int k1 = 0; k1 < m1; ++k1)
        for (int k2 = 0; k2 < m2; ++k2) v.at(k1, k2) = cplx(1.0 + 0.25 * k1, 0.5 + 0.125 * k2);
    return v;
}

GaussianVector test_vector(const EmbeddingMap& phi, const ComplexStructure& cs) {
    GaussianVector f = theta_vector(cs);
    if (const auto& part = phi.params().finite_part) f.finite = default_finite_vector(part->m1, part->m2);
    return f;
}

RunReport run_suite(const RunConfig& config, Suite suite) {
    require_seed_if_needed(config, suite);
    const auto start = std::chrono::steady_clock::now();

    RunReport report;
    report.suite = suite;
    report.config = to_json(config);
    report.config_hash = config_hash(config);

    std::optional<Context> ctx;
    try {
        const EmbeddingMap phi = build_embedding(config.embedding);
        ctx.emplace(Context{config, phi, make_complex_structure(phi, config.tau, config.lattice_decay),
                            config.seed ? std::optional<SplitMix64>(SplitMix64(*config.seed)) : std::nullopt,
                            std::nullopt});
    } catch (const Error& e) {
        VerificationReport r;
        r.name = "setup";
        r.metadata["error"] = e.what();
        r.metadata["error_code"] = std::string(to_string(e.code()));
        r.statistic = std::numeric_limits<double>::quiet_NaN();
        report.checks.push_back(r);
        report.pass = false;
        return report;
    }

    using Runner = void (*)(Context&, std::vector<VerificationReport>&);
    const std::vector<std::pair<Suite, Runner>> order{
        {Suite::Validate, suite_validate},
        {Suite::Commutation, suite_commutation},
        {Suite::Connections, suite_connections},
        {Suite::Holomorphy, suite_holomorphy},
        {Suite::NoGo, suite_nogo},
        {Suite::InnerProduct, suite_inner_product},
        {Suite::QuantumTheta, suite_quantum_theta},
        {Suite::FunctionalEquation, suite_functional_equation},
        {Suite::Consistency, suite_consistency},
        {Suite::Additivity, suite_additivity},
        {Suite::OracleCompare, suite_oracle_compare},
    };
    for (const auto& [s, run] : order) {
        if (suite == Suite::All || suite == s) run(*ctx, report.checks);
    }

    report.pass = !report.checks.empty() &&
                  std::all_of(report.checks.begin(), report.checks.end(), [](const auto& c) { return c.pass; });
    report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

int exit_code(const RunReport& report) { return report.pass ? 0 : 1; }

}  // namespace nctheta
