#pragma once

#include <Eigen/Dense>

#include <complex>

namespace nctheta {

using cplx = std::complex<double>;

struct ThetaEvalParams {
    cplx tau{0.0, 1.0};
    cplx z{0.0, 0.0};
    double tol = 1e-17;
};

struct ThetaResult {
    cplx value;
    int terms = 0;  // N: the sum runs over |n| <= N
};

/// θ(τ, z) = Σ_n exp(πiτn² + 2πinz), summed in symmetric pairs with compensated accumulation.
/// N is the first index past max(|Im z|/Im τ, 1) whose geometric tail bound falls below tol
/// relative to the largest term. Im τ <= 0 throws DivergentSeries.
ThetaResult jacobi_theta(const ThetaEvalParams& params);

/// (first, second) components of a point of the continuous part: position and dual.
/// The scalar context reads only coordinate 0 of each.
struct ContinuousPart {
    Eigen::Vector2d first = Eigen::Vector2d::Zero();
    Eigen::Vector2d second = Eigen::Vector2d::Zero();

    static ContinuousPart scalar(double w1, double w2);
};

class HermitianFormContext {
public:
    /// Throws NotPositive unless Im T > 0.
    static HermitianFormContext scalar(cplx t);
    /// Throws ConsistencyViolated unless T is symmetric, NotPositive unless Im T is positive definite.
    static HermitianFormContext matrix(const Eigen::Matrix2cd& t);

    bool is_matrix() const noexcept { return matrix_; }
    int dim() const noexcept { return matrix_ ? 2 : 1; }
    const Eigen::Matrix2cd& t() const noexcept { return t_; }
    const Eigen::Matrix2d& im_inverse() const noexcept { return im_inverse_; }
    /// 1/sqrt(2 Im T) or 1/sqrt(4 det Im T).
    double normalization() const noexcept { return normalization_; }

    /// g̲ = T g1 + g2 (first dim() entries meaningful).
    Eigen::Vector2cd underline(const ContinuousPart& g) const;
    /// h̲* = T̄ h1 + h2.
    Eigen::Vector2cd underline_conj(const ContinuousPart& h) const;

private:
    bool matrix_ = false;
    Eigen::Matrix2cd t_ = Eigen::Matrix2cd::Zero();
    Eigen::Matrix2d im_inverse_ = Eigen::Matrix2d::Zero();
    double normalization_ = 0.0;
};

/// H(g, h) = g̲ᵗ (Im T)⁻¹ h̲*.
cplx hermitian_form(const HermitianFormContext& ctx, const ContinuousPart& g, const ContinuousPart& h);

/// C̃_w − q(λ_w) computed from the completed-square data of the Gaussian integrand:
/// q(s) = 2 sᵗ(Im T)s, l(s) = 2i w̲*ᵗs, C̃_w = i w1ᵗw̲*, λ_w = −l/(4 Im T) = −(i/2)(Im T)⁻¹w̲*.
cplx completed_square_constant(const HermitianFormContext& ctx, const ContinuousPart& w);

/// normalization · exp(−(π/2) H(w, w)), after checking completed_square_constant against ½H(w, w)
/// (InternalIdentityViolated beyond 1e-12 relative to the terms involved).
cplx gaussian_factor(const HermitianFormContext& ctx, const ContinuousPart& w);

/// b_{t,m} = exp(−(π/θ2)m² − πimt) · θ(2i/θ2, −t + im/θ2).
cplx b_factor(double t, long long m, double theta2, double tol = 1e-17);

}  // namespace nctheta
