#include "fixtures.hpp"
#include "nctheta/error.hpp"
#include "nctheta/quadrature.hpp"
#include "nctheta/rng.hpp"
#include "nctheta/special_functions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace nctheta;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
}  // namespace

TEST(JacobiTheta, ValueAtI) {
    const ThetaResult r = jacobi_theta({kI, 0.0});
    EXPECT_NEAR(r.value.real(), fixtures::kThetaI, 1e-12);
    EXPECT_EQ(r.value.imag(), 0.0);
    EXPECT_LE(r.terms, 8);
    // Partial sum over |n| <= 8.
    double partial = 1.0;
    for (int n = 1; n <= 8; ++n) partial += 2.0 * std::exp(-kPi * n * n);
    EXPECT_NEAR(r.value.real(), partial, 1e-15);
}

TEST(JacobiTheta, ValueAt5I) {
    const double three_terms = 1.0 + 2.0 * std::exp(-5.0 * kPi) + 2.0 * std::exp(-20.0 * kPi);
    EXPECT_NEAR(jacobi_theta({5.0 * kI, 0.0}).value.real(), three_terms, 1e-15);
    EXPECT_NEAR(jacobi_theta({5.0 * kI, 0.0}).value.real(), fixtures::kTheta5i, 1e-15);
}

TEST(JacobiTheta, SeededIdentities) {
    SplitMix64 rng(20240601);
    for (int i = 0; i < 50; ++i) {
        const cplx tau(rng.uniform(-1.0, 1.0), rng.uniform(0.3, 3.0));
        const cplx z(rng.uniform(-1.0, 1.0), rng.uniform(-0.6, 0.6));
        const cplx base = jacobi_theta({tau, z}).value;
        EXPECT_LE(std::abs(jacobi_theta({tau, z + 1.0}).value - base) / std::abs(base), 1e-10);
        EXPECT_LE(std::abs(jacobi_theta({tau, -z}).value - base) / std::abs(base), 1e-10);
        const cplx shifted = jacobi_theta({tau, z + tau}).value;
        EXPECT_LE(std::abs(shifted - std::exp(-kPi * kI * tau - 2.0 * kPi * kI * z) * base) / std::abs(shifted),
                  1e-10);
    }
}

TEST(JacobiTheta, Divergent) {
    try {
        (void)jacobi_theta({cplx(0.3, 0.0), 0.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DivergentSeries);
    }
    EXPECT_THROW((void)jacobi_theta({cplx(0.3, -1.0), 0.0}), Error);
}

TEST(HermitianForm, ScalarExamples) {
    const auto ctx = HermitianFormContext::scalar(2.0 * kI);
    const auto w1 = ContinuousPart::scalar(1.0, 0.0);
    const auto w2 = ContinuousPart::scalar(0.0, 1.0);
    EXPECT_NEAR(std::abs(hermitian_form(ctx, w1, w1) - 2.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(hermitian_form(ctx, w2, w2) - 0.5), 0.0, 1e-15);
    EXPECT_EQ(hermitian_form(ctx, ContinuousPart::scalar(0.0, 0.0), w1), cplx(0.0));
}

TEST(HermitianForm, IsHermitian) {
    const auto ctx = HermitianFormContext::scalar(cplx(0.4, 1.3));
    const auto g = ContinuousPart::scalar(0.7, -1.2);
    const auto h = ContinuousPart::scalar(-0.3, 0.9);
    EXPECT_NEAR(std::abs(hermitian_form(ctx, g, h) - std::conj(hermitian_form(ctx, h, g))), 0.0, 1e-14);
    EXPECT_GT(hermitian_form(ctx, g, g).real(), 0.0);
}

TEST(HermitianForm, RejectsNonPositive) {
    try {
        (void)HermitianFormContext::scalar(cplx(1.0, 0.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotPositive);
    }
    Eigen::Matrix2cd t;
    t << kI, 0.0, 0.0, -kI;
    EXPECT_THROW((void)HermitianFormContext::matrix(t), Error);
}

TEST(GaussianFactor, Examples) {
    const auto ctx = HermitianFormContext::scalar(2.0 * kI);
    EXPECT_NEAR(std::abs(gaussian_factor(ctx, ContinuousPart::scalar(0, 0)) - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(gaussian_factor(ctx, ContinuousPart::scalar(1, 0)) - 0.5 * std::exp(-kPi)), 0.0, 1e-15);
    EXPECT_NEAR(0.5 * std::exp(-kPi), 0.021607, 1e-6);
    const auto m = HermitianFormContext::matrix(Eigen::Matrix2cd::Identity() * kI);
    EXPECT_NEAR(std::abs(gaussian_factor(m, ContinuousPart{}) - 0.5), 0.0, 1e-15);
}

TEST(GaussianFactor, CompletedSquareLemma) {
    SplitMix64 rng(7);
    for (int t = 0; t < 10; ++t) {
        const cplx tt(rng.uniform(-1.0, 1.0), rng.uniform(0.2, 5.0));
        const auto ctx = HermitianFormContext::scalar(tt);
        for (int i = 0; i < 10; ++i) {
            const auto w = ContinuousPart::scalar(rng.uniform(-2, 2), rng.uniform(-2, 2));
            EXPECT_LE(std::abs(completed_square_constant(ctx, w) - 0.5 * hermitian_form(ctx, w, w)), 1e-12);
        }
    }
}

TEST(GaussianFactor, MatrixLemma) {
    Eigen::Matrix2cd t;
    t << cplx(0.2, 1.5), cplx(0.1, 0.3), cplx(0.1, 0.3), cplx(-0.4, 0.9);
    const auto ctx = HermitianFormContext::matrix(t);
    ContinuousPart w;
    w.first << 0.7, -1.1;
    w.second << 0.4, 0.25;
    EXPECT_LE(std::abs(completed_square_constant(ctx, w) - 0.5 * hermitian_form(ctx, w, w)), 1e-12);
}

TEST(BFactor, Examples) {
    EXPECT_NEAR(b_factor(0.0, 0, 0.4).real(), fixtures::kTheta5i, 1e-15);
    EXPECT_NEAR(b_factor(0.5, 0, 0.4).real(), fixtures::kB05_0, 1e-15);
    EXPECT_NEAR(b_factor(0.0, 1, 0.4).real(), fixtures::kB0_1, 1e-15);
    EXPECT_NEAR(b_factor(0.0, 1, 0.4).real(), 2.0 * std::exp(-2.5 * kPi) * (1.0 + std::exp(-10.0 * kPi)), 1e-9);
    EXPECT_NEAR(b_factor(0.3, 0, 0.4).real(), fixtures::kB03_0, 1e-15);
    EXPECT_NEAR(std::abs(b_factor(0.3, 0, 0.4).imag()), 0.0, 1e-15);
}

TEST(Quadrature, GaussianIntegrals) {
    // q = 4i gives e^{−4πs²}; l = −1 gives e^{−2πis}
    EXPECT_NEAR(std::abs(gaussian_quadrature_oracle(4.0 * kI, 0.0, 0.0) - 0.5), 0.0, 1e-12);
    const cplx v = gaussian_quadrature_oracle(4.0 * kI, -1.0, 0.0);
    EXPECT_NEAR(v.real(), fixtures::kShiftedGaussianIntegral, 1e-10);
    EXPECT_NEAR(v.imag(), 0.0, 1e-12);
}

TEST(Quadrature, ConstantFactorsOut) {
    const cplx q(0.3, 1.7), l(0.2, -0.4), c(0.6, 0.1);
    const cplx a = gaussian_quadrature_oracle(q, l, c);
    const cplx b = std::exp(-kPi * c) * gaussian_quadrature_oracle(q, l, 0.0);
    EXPECT_LE(std::abs(a - b) / std::abs(b), 1e-10);
}

TEST(Quadrature, ClosedFormAgreement) {
    // ∫ exp(πi q s² + 2πi l s) ds = (−iq)^{-1/2} exp(−πi l²/q)
    const cplx q(0.5, 0.8), l(0.3, 0.2);
    const cplx exact = std::exp(-kI * kPi * l * l / q) / std::sqrt(-kI * q);
    EXPECT_LE(std::abs(gaussian_quadrature_oracle(q, l, 0.0) - exact) / std::abs(exact), 1e-10);
}

TEST(Quadrature, Divergent) {
    try {
        (void)gaussian_quadrature_oracle(cplx(1.0, -0.1), 0.0, 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DivergentIntegral);
    }
}

TEST(Quadrature, Adaptive) {
    const auto r = integrate_adaptive([](double x) { return cplx(std::sin(x), std::cos(x)); }, 0.0, kPi, 1e-12);
    EXPECT_NEAR(r.value.real(), 2.0, 1e-11);
    EXPECT_NEAR(r.value.imag(), 0.0, 1e-11);
    EXPECT_GT(r.evaluations, 0);
}
