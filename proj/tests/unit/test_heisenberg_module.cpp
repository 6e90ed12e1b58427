#include "fixtures.hpp"
#include "nctheta/error.hpp"
#include "nctheta/heisenberg_module.hpp"
#include "nctheta/suites.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace nctheta;

namespace {

constexpr double kPi = std::numbers::pi;

ModulePoint lattice_point(double s, std::int64_t n1 = 0, std::int64_t n2 = 0) {
    ModulePoint x;
    x.s = {s, 0.0};
    x.n = {n1, n2};
    return x;
}

cplx expi(double a) { return std::polar(1.0, a); }

}  // namespace

TEST(HeisenbergModule, PiByW2IsAPhase) {
    const EmbeddingMap phi = fixtures::lattice();
    const GaussianVector f = theta_vector(fixtures::lattice_structure());
    const GaussianVector g = apply_pi(lattice_element(phi, unit_index(2)), f);
    const cplx v = g(lattice_point(0.25));
    EXPECT_NEAR(v.real(), 0.0, 1e-15);
    EXPECT_NEAR(v.imag(), fixtures::kExpMinusPiOver8, 1e-15);
}

TEST(HeisenbergModule, PiByZeroIsIdentity) {
    const EmbeddingMap phi = fixtures::lattice();
    const GaussianVector f = theta_vector(fixtures::lattice_structure());
    const GaussianVector g = apply_pi(lattice_element(phi, {0, 0, 0, 0}), f);
    for (double s : {-1.0, 0.1, 0.7})
        for (int n = -2; n <= 2; ++n) EXPECT_EQ(g(lattice_point(s, n, -n)), f(lattice_point(s, n, -n)));
}

TEST(HeisenbergModule, GeneratorOneShiftsByTheta1) {
    const EmbeddingMap phi = fixtures::lattice();
    const GaussianVector f = theta_vector(fixtures::lattice_structure());
    const ModuleVector u = apply_generator(phi, 1, ModuleVector(f));
    for (double s : {-0.3, 0.0, 0.45}) {
        const cplx got = evaluate(u, lattice_point(s, 1, 0));
        EXPECT_NEAR(std::abs(got - f(lattice_point(s + 0.5, 1, 0))), 0.0, 1e-15);
    }
}

TEST(HeisenbergModule, FiniteGeneratorPhase) {
    FinitePart part{2, 5, 1, 2};
    FiniteVector v = default_finite_vector(2, 5);
    const FiniteVector w = apply_finite_generator(part, 2, v);
    EXPECT_NEAR(std::abs(w.at(1, 3) + v.at(1, 3)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(w.at(0, 3) - v.at(0, 3)), 0.0, 1e-15);
    const FiniteVector s = apply_finite_generator(part, 1, v);
    EXPECT_EQ(s.at(1, 2), v.at(0, 2));
    EXPECT_EQ(s.at(0, 2), v.at(1, 2));
}

TEST(HeisenbergModule, GeneratorOnZeroVector) {
    const EmbeddingMap phi = fixtures::lattice();
    GaussianVector f = theta_vector(fixtures::lattice_structure());
    const SampledVector zero(EmbeddingKind::Lattice, default_grid(f, 0.05));
    const ModuleVector u = apply_generator(phi, 1, ModuleVector(zero));
    for (const auto& v : std::get<SampledVector>(u).values()) EXPECT_EQ(v, cplx(0.0));
}

TEST(HeisenbergModule, CocycleOracleOnSampledGaussian) {
    const EmbeddingMap phi = fixtures::lattice();
    const GaussianVector f = theta_vector(fixtures::lattice_structure());
    const SampledVector s = sample(f, default_grid(f, 0.05));
    const auto g = lattice_element(phi, unit_index(1));
    const auto h = lattice_element(phi, unit_index(2));
    const SampledVector lhs = apply_pi(g, apply_pi(h, s));
    const SampledVector rhs = apply_pi(g + h, s);
    // Read the phase off the sampled data.
    cplx ratio{};
    double weight = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        if (std::abs(rhs.values()[i]) > 1e-3) {
            ratio += lhs.values()[i] / rhs.values()[i];
            weight += 1.0;
        }
    }
    ratio /= weight;
    EXPECT_NEAR(std::abs(ratio - cplx(0.0, 1.0)), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(ratio - cocycle_alpha(g, h)), 0.0, 1e-10);
}

TEST(HeisenbergModule, OffGridShiftIsRejected) {
    const EmbeddingMap phi = fixtures::lattice();
    const GaussianVector f = theta_vector(fixtures::lattice_structure());
    const SampledVector s = sample(f, default_grid(f, 0.3));
    EXPECT_THROW((void)apply_pi(lattice_element(phi, unit_index(1)), s), Error);
}

TEST(HeisenbergModule, CommutationPhases) {
    const EmbeddingMap phi = fixtures::lattice();
    const GaussianVector f = theta_vector(fixtures::lattice_structure());
    for (double spacing : {0.05, 0.025}) {
        const SampledVector s = sample(f, default_grid(f, spacing));
        EXPECT_NEAR(std::abs(measure_commutation_phase(phi, 1, 2, s) - cplx(-1.0, 0.0)), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(measure_commutation_phase(phi, 3, 4, s) - expi(0.8 * kPi)), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(measure_commutation_phase(phi, 1, 3, s) - 1.0), 0.0, 1e-10);
    }
}

TEST(HeisenbergModule, CommutationPhasesWithFinitePart) {
    auto p = fixtures::vector_params();
    p.finite_part = FinitePart{2, 5, 1, 2};
    const EmbeddingMap phi = build_embedding(p);
    Eigen::Matrix2cd tau = Eigen::Matrix2cd::Zero();
    tau(0, 0) = {0.0, 1.0};
    tau(1, 1) = {0.0, 0.8};
    const GaussianVector f = test_vector(phi, make_complex_structure(phi, tau));
    const GridSpec grid = default_grid(f, 0.25);
    EXPECT_NEAR(std::abs(measure_commutation_phase(phi, 1, 2, f, grid) - expi(kPi)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(measure_commutation_phase(phi, 3, 4, f, grid) - expi(0.8 * kPi)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(measure_commutation_phase(phi, 2, 3, f, grid) - 1.0), 0.0, 1e-9);
}

TEST(HeisenbergModule, ConnectionCoefficients) {
    const ConnectionSet lat = build_connections(fixtures::lattice());
    const auto m3 = lat.multiplier(3);
    EXPECT_EQ(m3[0], 0.0);
    EXPECT_EQ(m3[1], 1.0);
    EXPECT_EQ(m3[2], 0.0);
    const auto m4 = lat.multiplier(4);
    EXPECT_EQ(m4[2], 1.0);
    EXPECT_EQ(lat.derivative(2)[0], 1.0);

    auto p = fixtures::lattice_params();
    p.m << 2, 1, 1, 1;
    p.delta_hat = compatible_delta_hat(p.m, 0.4);
    const ConnectionSet c = build_connections(build_embedding(p));
    Eigen::Matrix2d expected;
    expected << 1, -1, -1, 2;
    EXPECT_EQ((c.b - expected).cwiseAbs().maxCoeff(), 0.0);

    const ConnectionSet vec = build_connections(fixtures::vector());
    Eigen::Matrix4d a;
    a << 2, 0, 0, 0, 0, 0, 1, 0, 0, 2.5, 0, 0, 0, 0, 0, 1;
    EXPECT_LT((vec.coefficients - a).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(HeisenbergModule, ConnectionCommutator) {
    const EmbeddingMap phi = fixtures::lattice();
    const GaussianVector f = theta_vector(fixtures::lattice_structure());
    const ResidualGrid rg{default_grid(f, 0.25), 1e-3};
    EXPECT_LE(connection_commutator_residual(phi, 1, 1, f, rg), 1e-8);
    EXPECT_LE(connection_commutator_residual(phi, 2, 3, f, rg), 1e-8);
    EXPECT_LE(connection_commutator_residual(phi, 2, 2, f, rg), 1e-8);
}

TEST(HeisenbergModule, ConnectionRefinement) {
    const EmbeddingMap phi = fixtures::lattice();
    const GaussianVector f = theta_vector(fixtures::lattice_structure());
    const GridSpec grid = default_grid(f, 0.25);
    const double coarse = connection_commutator_residual(phi, 2, 2, f, {grid, 0.04});
    const double fine = connection_commutator_residual(phi, 2, 2, f, {grid, 0.02});
    EXPECT_GE(coarse / fine, 8.0);
}

TEST(HeisenbergModule, SampledConnectionAgreesWithClosedForm) {
    const EmbeddingMap phi = fixtures::vector();
    const GaussianVector f = theta_vector(fixtures::vector_structure());
    const SampledVector s = sample(f, default_grid(f, 0.05));
    // Sampled residual is limited by the grid step as the difference step.
    EXPECT_LE(connection_commutator_residual(phi, 1, 2, s), 1e-3);
    EXPECT_LE(connection_commutator_residual(phi, 3, 3, s), 1e-3);
}

TEST(HeisenbergModule, DefaultGridCoversTheGaussian) {
    const GaussianVector f = theta_vector(fixtures::lattice_structure());
    const GridSpec g = default_grid(f, 0.05);
    EXPECT_GT(g.extent, 2.0);
    EXPECT_GE(g.window, 2);
    EXPECT_EQ(g.points_per_axis(), 2 * static_cast<int>(std::lround(g.extent / 0.05)) + 1);
    ModulePoint edge = lattice_point(g.extent);
    EXPECT_LT(std::abs(f(edge)), 1e-20);
}
