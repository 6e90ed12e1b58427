#include "nctheta/special_functions.hpp"

#include "nctheta/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nctheta {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
constexpr int kMaxThetaTerms = 1000000;

/// Kahan accumulator over both components.
struct CompensatedSum {
    double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;

    void add(cplx x) {
        const double yr = x.real() - cre;
        const double tr = re + yr;
        cre = (tr - re) - yr;
        re = tr;
        const double yi = x.imag() - cim;
        const double ti = im + yi;
        cim = (ti - im) - yi;
        im = ti;
    }
    cplx value() const { return {re, im}; }
};

}  // namespace

ThetaResult jacobi_theta(const ThetaEvalParams& params) {
    const double y = params.tau.imag();
    if (!(y > 0.0)) throw Error(ErrorCode::DivergentSeries, "theta series needs Im tau > 0, got " + std::to_string(y));
    if (!(params.tol > 0.0)) throw Error(ErrorCode::DivergentSeries, "theta tolerance must be positive");

    const double imz = std::abs(params.z.imag());
    auto term = [&](double n) { return std::exp(kI * kPi * params.tau * n * n + 2.0 * kI * kPi * n * params.z); };
    // log|a_n| is largest near n = -Im z / Im tau; the tail bound only applies past that point.
    const int n_min = static_cast<int>(std::ceil(imz / y)) + 1;

    CompensatedSum sum;
    const cplx a0 = term(0.0);
    sum.add(a0);
    double largest = std::abs(a0);
    for (int n = 1; n <= kMaxThetaTerms; ++n) {
        const cplx ap = term(n);
        const cplx am = term(-n);
        sum.add(ap + am);
        largest = std::max({largest, std::abs(ap), std::abs(am)});
        if (n < n_min) continue;
        const double next = n + 1.0;
        const double log_next = -kPi * y * next * next + 2.0 * kPi * imz * next;
        const double ratio = std::exp(-kPi * y * (2.0 * next + 1.0) + 2.0 * kPi * imz);
        if (ratio >= 1.0) continue;
        const double tail = 2.0 * std::exp(log_next) / (1.0 - ratio);
        if (tail < params.tol * largest) return {sum.value(), n};
    }
    throw Error(ErrorCode::DivergentSeries, "theta series did not converge within the term budget");
}

ContinuousPart ContinuousPart::scalar(double w1, double w2) {
    ContinuousPart p;
    p.first(0) = w1;
    p.second(0) = w2;
    return p;
}

HermitianFormContext HermitianFormContext::scalar(cplx t) {
    if (!(t.imag() > 0.0)) throw Error(ErrorCode::NotPositive, "Im T must be positive");
    HermitianFormContext ctx;
    ctx.matrix_ = false;
    ctx.t_(0, 0) = t;
    ctx.im_inverse_(0, 0) = 1.0 / t.imag();
    ctx.normalization_ = 1.0 / std::sqrt(2.0 * t.imag());
    return ctx;
}

HermitianFormContext HermitianFormContext::matrix(const Eigen::Matrix2cd& t) {
    if (std::abs(t(0, 1) - t(1, 0)) > 1e-12 * std::max(1.0, t.cwiseAbs().maxCoeff())) {
        throw Error(ErrorCode::ConsistencyViolated, "complex structure matrix must be symmetric");
    }
    const Eigen::Matrix2d y = t.imag();
    const double det = y.determinant();
    if (!(y(0, 0) > 0.0) || !(det > 0.0)) throw Error(ErrorCode::NotPositive, "Im T must be positive definite");
    HermitianFormContext ctx;
    ctx.matrix_ = true;
    ctx.t_ = t;
    ctx.im_inverse_ = y.inverse();
    ctx.normalization_ = 1.0 / std::sqrt(4.0 * det);
    return ctx;
}

Eigen::Vector2cd HermitianFormContext::underline(const ContinuousPart& g) const {
    if (!matrix_) return Eigen::Vector2cd(t_(0, 0) * g.first(0) + g.second(0), 0.0);
    return t_ * g.first.cast<cplx>() + g.second.cast<cplx>();
}

Eigen::Vector2cd HermitianFormContext::underline_conj(const ContinuousPart& h) const {
    if (!matrix_) return Eigen::Vector2cd(std::conj(t_(0, 0)) * h.first(0) + h.second(0), 0.0);
    return t_.conjugate() * h.first.cast<cplx>() + h.second.cast<cplx>();
}

cplx hermitian_form(const HermitianFormContext& ctx, const ContinuousPart& g, const ContinuousPart& h) {
    const Eigen::Vector2cd gu = ctx.underline(g);
    const Eigen::Vector2cd hs = ctx.underline_conj(h);
    if (!ctx.is_matrix()) return gu(0) * ctx.im_inverse()(0, 0) * hs(0);
    return (gu.transpose() * ctx.im_inverse().cast<cplx>() * hs)(0, 0);
}

namespace {

struct CompletedSquare {
    cplx c_tilde;
    cplx q_lambda;
};

CompletedSquare completed_square(const HermitianFormContext& ctx, const ContinuousPart& w) {
    const int d = ctx.dim();
    const Eigen::Matrix2d y = ctx.t().imag();
    const Eigen::Vector2cd ws = ctx.underline_conj(w);
    // l(s) = l_vecᵗ s, with l_vec = 2i w̲*.
    const Eigen::Vector2cd l_vec = 2.0 * kI * ws;
    // λ solves ∇(q + l) = 0: 4 Y λ + l_vec = 0.
    Eigen::Vector2cd lambda = Eigen::Vector2cd::Zero();
    if (d == 1) {
        lambda(0) = -l_vec(0) / (4.0 * y(0, 0));
    } else {
        lambda = -(y.cast<cplx>().fullPivLu().solve(l_vec)) / 4.0;
    }
    cplx q{};
    cplx c{};
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) q += 2.0 * lambda(a) * y(a, b) * lambda(b);
        c += kI * w.first(a) * ws(a);
    }
    return {c, q};
}

}  // namespace

cplx completed_square_constant(const HermitianFormContext& ctx, const ContinuousPart& w) {
    const auto cs = completed_square(ctx, w);
    return cs.c_tilde - cs.q_lambda;
}

cplx gaussian_factor(const HermitianFormContext& ctx, const ContinuousPart& w) {
    const auto cs = completed_square(ctx, w);
    const cplx half_h = 0.5 * hermitian_form(ctx, w, w);
    const cplx lhs = cs.c_tilde - cs.q_lambda;
    const double scale = std::max({1.0, std::abs(cs.c_tilde), std::abs(cs.q_lambda), std::abs(half_h)});
    if (std::abs(lhs - half_h) > 1e-12 * scale) {
        throw Error(ErrorCode::InternalIdentityViolated,
                    "completed-square constant differs from H/2 by " + std::to_string(std::abs(lhs - half_h)));
    }
    return ctx.normalization() * std::exp(-kPi * half_h);
}

cplx b_factor(double t, long long m, double theta2, double tol) {
    if (!(theta2 > 0.0)) throw Error(ErrorCode::DivergentSeries, "b-factor needs theta2 > 0");
    const double md = static_cast<double>(m);
    const ThetaResult th = jacobi_theta({cplx(0.0, 2.0 / theta2), cplx(-t, md / theta2), tol});
    return std::exp(-kPi / theta2 * md * md - kI * kPi * md * t) * th.value;
}

}  // namespace nctheta
