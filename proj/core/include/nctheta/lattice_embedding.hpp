#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace nctheta {

enum class EmbeddingKind { VectorSpace, Lattice };

const char* to_string(EmbeddingKind kind) noexcept;

/// Finite group F = Z_m1 x Z_m2 carried by the vector-space construction.
struct FinitePart {
    int m1 = 1;
    int m2 = 1;
    int n1 = 0;
    int n2 = 0;
};

struct EmbeddingParams {
    EmbeddingKind kind = EmbeddingKind::Lattice;
    double theta1 = 0.0;
    double theta2 = 0.0;  // VectorSpace only
    Eigen::Matrix2i m = Eigen::Matrix2i::Identity();  // Lattice only
    Eigen::Matrix2d delta_hat = Eigen::Matrix2d::Zero();  // Lattice only
    std::optional<FinitePart> finite_part;  // VectorSpace only
    /// Skip the column condition on Φ (lattice kind). Determinant and positivity are still enforced.
    bool allow_invalid = false;
};

/// Φ with D = Φ(Z^4) inside M x M̂.
///
/// Row layout of `entries()`:
///   VectorSpace (4x4): s1-shift, s2-shift | ŝ1, ŝ2
///   Lattice     (6x4): w1 (R), m1, m2 (Z^2) | w2 (R*), t1, t2 (lifts of T^2)
/// The first `position_dim()` rows are the M part, the remaining rows the M̂ part.
class EmbeddingMap {
public:
    EmbeddingKind kind() const noexcept { return params_.kind; }
    const EmbeddingParams& params() const noexcept { return params_; }
    const Eigen::MatrixXd& entries() const noexcept { return entries_; }

    /// 2 for VectorSpace (R^2), 3 for Lattice (R x Z^2).
    int position_dim() const noexcept { return kind() == EmbeddingKind::VectorSpace ? 2 : 3; }
    /// Number of continuous variables of the module: 2 or 1.
    int continuous_dim() const noexcept { return kind() == EmbeddingKind::VectorSpace ? 2 : 1; }
    /// Number of integer variables of the module: 0 or 2.
    int discrete_dim() const noexcept { return kind() == EmbeddingKind::VectorSpace ? 0 : 2; }

    bool has_finite_part() const noexcept { return params_.finite_part.has_value(); }
    /// False when built with allow_invalid and the column condition fails.
    bool satisfies_column_condition() const noexcept { return column_condition_ok_; }

    /// Σ_k x_kj x_(k+p)j for column j (0-based); zero for a valid embedding.
    double column_condition(int column) const;

    /// b = m^{-1} (lattice kind).
    Eigen::Matrix2d inverse_m() const;

private:
    friend EmbeddingMap build_embedding(const EmbeddingParams& params);
    EmbeddingParams params_;
    Eigen::MatrixXd entries_;
    bool column_condition_ok_ = true;
};

EmbeddingMap build_embedding(const EmbeddingParams& params);

using LatticeIndex = std::array<int, 4>;

/// An element Φ·k of D with its ambient coordinates. Torus coordinates are unreduced lifts.
struct LatticeElement {
    EmbeddingKind kind = EmbeddingKind::Lattice;
    LatticeIndex k{};
    std::array<double, 3> position{};  // M part
    std::array<double, 3> dual{};      // M̂ part

    int position_dim() const noexcept { return kind == EmbeddingKind::VectorSpace ? 2 : 3; }

    // Lattice-kind accessors.
    double w1() const noexcept { return position[0]; }
    std::int64_t m1() const noexcept { return static_cast<std::int64_t>(std::llround(position[1])); }
    std::int64_t m2() const noexcept { return static_cast<std::int64_t>(std::llround(position[2])); }
    double w2() const noexcept { return dual[0]; }
    double t1() const noexcept { return dual[1]; }
    double t2() const noexcept { return dual[2]; }

    std::span<const double> position_part() const noexcept {
        return {position.data(), static_cast<std::size_t>(position_dim())};
    }
    std::span<const double> dual_part() const noexcept {
        return {dual.data(), static_cast<std::size_t>(position_dim())};
    }

    LatticeElement operator-() const;
};

LatticeElement operator+(const LatticeElement& a, const LatticeElement& b);
LatticeElement operator-(const LatticeElement& a, const LatticeElement& b);

struct DeformationMatrix {
    Eigen::Matrix4d theta = Eigen::Matrix4d::Zero();

    double operator()(int i, int j) const { return theta(i, j); }
};

DeformationMatrix commutation_matrix(const EmbeddingMap& phi);

LatticeElement lattice_element(const EmbeddingMap& phi, const LatticeIndex& k);

/// Basis vector e_j for j in 1..4.
LatticeIndex unit_index(int j);

LatticeIndex operator+(const LatticeIndex& a, const LatticeIndex& b);
LatticeIndex operator-(const LatticeIndex& a, const LatticeIndex& b);
int sup_norm(const LatticeIndex& k) noexcept;

/// All k with |k|_inf <= radius, ordered by |k|_inf then lexicographically.
std::vector<LatticeIndex> enumerate_indices(int radius);

std::vector<LatticeElement> enumerate_lattice(const EmbeddingMap& phi, int radius);

/// ⟨r, ŝ⟩ for r in M and ŝ in M̂. Sizes must match the embedding kind (2 or 3).
double pairing(EmbeddingKind kind, std::span<const double> m_part, std::span<const double> dual_part);

/// α(x, y) = exp(πi(⟨x_M, y_M̂⟩ − ⟨y_M, x_M̂⟩)).
///
/// Composing the symmetrized action
///   (π_h f)(r) = exp(2πi⟨r, ĥ⟩ + πi⟨h_M, ĥ⟩) f(r + h_M)
/// twice gives
///   π_g π_h f(r) = exp(2πi⟨r, ĝ+ĥ⟩ + πi⟨g_M, ĝ⟩ + 2πi⟨g_M, ĥ⟩ + πi⟨h_M, ĥ⟩) f(r + g_M + h_M),
/// while π_{g+h} carries πi⟨g_M + h_M, ĝ + ĥ⟩. The quotient is exp(πi(⟨g_M, ĥ⟩ − ⟨h_M, ĝ⟩)).
std::complex<double> cocycle_alpha(const LatticeElement& x, const LatticeElement& y);

/// The exponent ⟨x_M, y_M̂⟩ − ⟨y_M, x_M̂⟩ (so α = exp(πi·exponent)).
double cocycle_exponent(const LatticeElement& x, const LatticeElement& y);

}  // namespace nctheta
