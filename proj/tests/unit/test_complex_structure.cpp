#include "fixtures.hpp"
#include "nctheta/complex_structure.hpp"
#include "nctheta/error.hpp"
#include "nctheta/suites.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace nctheta;

TEST(ComplexStructure, FullOmegaIsIdentityTimesI) {
    const FullOmega s = make_full_structure(fixtures::vector_tau(), 0.5, 0.4);
    Eigen::Matrix2cd expected = Eigen::Matrix2cd::Identity() * cplx(0.0, 1.0);
    EXPECT_LT((s.omega - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ComplexStructure, PartialT) {
    const PartialT s = make_partial_structure({0.0, 1.0}, 0.5, 0.4);
    EXPECT_NEAR(std::abs(s.t - cplx(0.0, 2.0)), 0.0, 1e-15);
    EXPECT_NEAR(s.lattice_decay, 2.5, 1e-15);
    const auto cs = fixtures::lattice_structure();
    ASSERT_TRUE(std::holds_alternative<PartialT>(cs));
    EXPECT_NEAR(std::get<PartialT>(cs).theta2, 0.4, 1e-15);
}

TEST(ComplexStructure, AsymmetricOmegaIsRejected) {
    Eigen::Matrix2cd tau = fixtures::vector_tau();
    tau(0, 1) = {0.1, 0.0};
    tau(1, 0) = {0.3, 0.0};
    try {
        (void)make_full_structure(tau, 0.5, 0.4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConsistencyViolated);
    }
    // τ12/θ2 = τ21/θ1 is accepted.
    tau(0, 1) = {0.08, 0.0};
    tau(1, 0) = {0.1, 0.0};
    EXPECT_NO_THROW((void)make_full_structure(tau, 0.5, 0.4));
}

TEST(ComplexStructure, NonPositiveImaginaryPart) {
    EXPECT_THROW((void)make_partial_structure({0.0, -1.0}, 0.5, 0.4), Error);
    Eigen::Matrix2cd tau = fixtures::vector_tau();
    tau(1, 1) = {0.0, -0.4};
    EXPECT_THROW((void)make_full_structure(tau, 0.5, 0.4), Error);
}

TEST(ComplexStructure, ThetaVectorValues) {
    const GaussianVector v = theta_vector(fixtures::vector_structure());
    ModulePoint origin;
    EXPECT_NEAR(std::abs(v(origin) - 1.0), 0.0, 1e-15);

    const GaussianVector l = theta_vector(fixtures::lattice_structure());
    ModulePoint x;
    x.s = {0.5, 0.0};
    x.n = {1, 0};
    // exp(πi·2i·0.25)·exp(−π·2.5·1) = e^{−3π}
    EXPECT_NEAR(std::abs(l(x)) / fixtures::kExpMinus3Pi, 1.0, 1e-12);
}

TEST(ComplexStructure, ThetaVectorDecaysAlongRays) {
    const GaussianVector l = theta_vector(fixtures::lattice_structure());
    double prev = 2.0;
    for (int i = 0; i <= 10; ++i) {
        ModulePoint x;
        x.s = {0.2 * i, 0.0};
        const double v = std::abs(l(x));
        EXPECT_LT(v, prev);
        prev = v;
    }
    prev = 2.0;
    for (int n = 0; n <= 3; ++n) {
        ModulePoint x;
        x.n = {0, n};
        const double v = std::abs(l(x));
        EXPECT_LT(v, prev);
        prev = v;
    }
}

TEST(ComplexStructure, HolomorphyResiduals) {
    {
        const auto cs = fixtures::vector_structure();
        const GaussianVector f = theta_vector(cs);
        EXPECT_LE(holomorphy_residual(f, cs, fixtures::vector(), {default_grid(f, 0.1), 1e-3}), 1e-8);
    }
    {
        const auto cs = fixtures::lattice_structure();
        const GaussianVector f = theta_vector(cs);
        const ResidualGrid rg{default_grid(f, 0.1), 1e-3};
        EXPECT_LE(holomorphy_residual(f, cs, fixtures::lattice(), rg), 1e-8);
        GaussianVector wrong = f;
        wrong.quadratic(0, 0) = cplx(0.5, 1.0);
        EXPECT_GT(holomorphy_residual(wrong, cs, fixtures::lattice(), rg), 0.1);
    }
}

TEST(ComplexStructure, HolomorphyWithGeneralOmega) {
    Eigen::Matrix2cd tau;
    // Ω = [[1+2i, 0.3+0.2i],[0.3+0.2i, −0.5+1.5i]] via τ_ij = Ω_ij θ_j
    const double t1 = 0.5, t2 = 0.4;
    Eigen::Matrix2cd omega;
    omega << cplx(1, 2), cplx(0.3, 0.2), cplx(0.3, 0.2), cplx(-0.5, 1.5);
    tau << omega(0, 0) * t1, omega(0, 1) * t2, omega(1, 0) * t1, omega(1, 1) * t2;
    const EmbeddingMap phi = fixtures::vector();
    const auto cs = make_complex_structure(phi, tau);
    const GaussianVector f = theta_vector(cs);
    EXPECT_LE(holomorphy_residual(f, cs, phi, {default_grid(f, 0.1), 1e-3}), 1e-8);
}

TEST(ComplexStructure, LatticeDirectionsDoNotAnnihilate) {
    const GaussianVector f = theta_vector(fixtures::lattice_structure());
    const GridSpec grid = default_grid(f, 0.25);
    EXPECT_GT(lattice_direction_residual(f, fixtures::lattice(), 1.0, 0.0, grid), 0.01);
    EXPECT_GT(lattice_direction_residual(f, fixtures::lattice(), 0.0, 1.0, grid), 0.01);
    EXPECT_GT(lattice_direction_residual(f, fixtures::lattice(), std::sqrt(0.5), cplx(0.0, std::sqrt(0.5)), grid),
              0.01);
}

TEST(LaurentPolynomial, Arithmetic) {
    using P = LaurentPolynomial;
    const P x = P::variable(0);
    const P y = P::variable(1);
    const P e = (x + y) * (x - y) - (x * x - y * y);
    EXPECT_TRUE(e.is_zero());
    const P inv = P::variable(0, -1);
    EXPECT_EQ(x * inv, P::constant(1));
    EXPECT_EQ((x * y).inverse_monomial() * x * y, P::constant(1));
    EXPECT_THROW((void)(P::constant(3) * x).inverse_monomial(), Error);
    EXPECT_EQ((x * x * y).degree_in(0), 2);
    const P sub = (x * y).substitute(1, x);
    EXPECT_EQ(sub, x * x);
    std::array<cplx, LaurentPolynomial::kVariables> vals{};
    vals.fill(1.0);
    vals[0] = 2.0;
    EXPECT_EQ((x * x + y).evaluate(vals), cplx(5.0));
}

TEST(NoGo, CertificateForGenericTau) {
    Eigen::Matrix2cd tau;
    tau << cplx(1, 1), 2.0, 3.0, 6.0 / cplx(1, 1);
    const InfeasibilityCertificate c = holomorphic_feasibility(fixtures::lattice(), tau);
    EXPECT_TRUE(c.determinant_identically_zero);
    EXPECT_TRUE(c.determinant.is_zero());
    EXPECT_TRUE(c.infeasible);
    EXPECT_NE(c.det_b_from_m, 0.0);
    EXPECT_FALSE(c.trace.empty());
    EXPECT_GE(c.relations.size(), 2u);
}

TEST(NoGo, IndependentOfM) {
    Eigen::Matrix2cd tau;
    tau << cplx(0.3, 1.2), cplx(-0.7, 0.4), cplx(1.1, -0.2), cplx(0.5, 0.9);
    for (const auto& rows : {std::array<int, 4>{1, 0, 0, 1}, {2, 1, 1, 1}, {3, 1, 2, 1}, {1, 0, 1, -2}}) {
        auto p = fixtures::lattice_params();
        p.m << rows[0], rows[1], rows[2], rows[3];
        p.delta_hat = compatible_delta_hat(p.m, 0.4);
        const EmbeddingMap phi = build_embedding(p);
        EXPECT_NEAR(commutation_matrix(phi)(2, 3), 0.4, 1e-14);
        const auto c = holomorphic_feasibility(phi, tau);
        EXPECT_TRUE(c.infeasible);
        EXPECT_TRUE(c.determinant.is_zero());
    }
}

TEST(NoGo, DegenerateTau) {
    Eigen::Matrix2cd tau;
    tau << cplx(1, 1), 0.0, 3.0, cplx(2, 1);
    try {
        (void)holomorphic_feasibility(fixtures::lattice(), tau);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateTau);
    }
}

TEST(NoGo, RequiresLatticeEmbedding) {
    EXPECT_THROW((void)holomorphic_feasibility(fixtures::vector(), fixtures::vector_tau()), Error);
}

TEST(NoGo, ThetaSymbolNames) {
    const auto& names = nogo_variable_names();
    EXPECT_EQ(names[kTau11], "tau11");
    EXPECT_EQ(names[kB22], "b22");
}
