#pragma once

#include "nctheta/lattice_embedding.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace nctheta {

using cplx = std::complex<double>;

/// A point of R^p x Z^q x F. Unused coordinates stay zero.
struct ModulePoint {
    std::array<double, 2> s{};
    std::array<std::int64_t, 2> n{};
    std::array<int, 2> k{};
};

/// Function on Z_m1 x Z_m2, stored row-major (k1 * m2 + k2). Indices wrap modulo the orders.
struct FiniteVector {
    int m1 = 1;
    int m2 = 1;
    std::vector<cplx> values;

    cplx at(int k1, int k2) const;
    cplx& at(int k1, int k2);
};

/// Closed-form module element
///   f(s, n, k) = exp(κ + πi sᵗQs + 2πi ℓᵗs − π d |n|² + 2π uᵗn) · φ(k)
/// The class is stable under every π_h, so operators act on the parameters exactly.
struct GaussianVector {
    EmbeddingKind kind = EmbeddingKind::Lattice;
    Eigen::Matrix2cd quadratic = Eigen::Matrix2cd::Zero();  // Q (1x1 block used for lattice kind)
    Eigen::Vector2cd linear = Eigen::Vector2cd::Zero();     // ℓ
    cplx constant{0.0, 0.0};                                // κ
    double lattice_decay = 0.0;                             // d (lattice kind)
    Eigen::Vector2cd lattice_linear = Eigen::Vector2cd::Zero();  // u (lattice kind)
    std::optional<FiniteVector> finite;

    int continuous_dim() const noexcept { return kind == EmbeddingKind::VectorSpace ? 2 : 1; }
    int discrete_dim() const noexcept { return kind == EmbeddingKind::VectorSpace ? 0 : 2; }

    /// Smallest eigenvalue of Im Q; positive for square-integrable vectors.
    double min_imag_eigenvalue() const;

    cplx operator()(const ModulePoint& x) const;

    /// exp(πi sᵗQs + 2πi ℓᵗs), without κ.
    cplx continuous_factor(const std::array<double, 2>& s) const;
    /// Single-axis continuous factor; valid only when Q is diagonal.
    cplx axis_factor(int axis, double s) const;
    /// exp(−π d |n|² + 2π uᵗn), without κ.
    cplx discrete_factor(const std::array<std::int64_t, 2>& n) const;
    cplx finite_factor(const std::array<int, 2>& k) const;
    bool diagonal_quadratic() const;
};

/// Continuous axes span [−extent, extent] with the given spacing; integer axes span [−window, window].
struct GridSpec {
    double extent = 6.0;
    double spacing = 0.01;
    int window = 4;

    int points_per_axis() const;
    double coordinate(int i) const { return -extent + spacing * i; }
};

/// Grid-sampled module element. Values outside the stored range are treated as zero.
class SampledVector {
public:
    SampledVector(EmbeddingKind kind, GridSpec grid, int finite_m1 = 1, int finite_m2 = 1);

    EmbeddingKind kind() const noexcept { return kind_; }
    const GridSpec& grid() const noexcept { return grid_; }
    int continuous_dim() const noexcept { return kind_ == EmbeddingKind::VectorSpace ? 2 : 1; }
    int discrete_dim() const noexcept { return kind_ == EmbeddingKind::VectorSpace ? 0 : 2; }
    int finite_m1() const noexcept { return fm1_; }
    int finite_m2() const noexcept { return fm2_; }
    bool has_finite_part() const noexcept { return fm1_ * fm2_ > 1; }

    std::size_t size() const noexcept { return values_.size(); }
    std::vector<cplx>& values() noexcept { return values_; }
    const std::vector<cplx>& values() const noexcept { return values_; }

    ModulePoint point(std::size_t flat) const;
    /// Throws GridIncompatibleShift for continuous coordinates off the grid.
    cplx at(const ModulePoint& x) const;
    /// True when the point lies on the stored grid (continuous and integer coordinates).
    bool contains(const ModulePoint& x) const;

private:
    std::optional<std::size_t> index_of(const ModulePoint& x) const;

    EmbeddingKind kind_;
    GridSpec grid_;
    int fm1_;
    int fm2_;
    int ns_;
    int nn_;
    std::vector<cplx> values_;
};

using ModuleVector = std::variant<GaussianVector, SampledVector>;

EmbeddingKind kind_of(const ModuleVector& f);

/// Pointwise evaluation of either representation.
cplx evaluate(const ModuleVector& f, const ModulePoint& x);

/// Grid with extent 6/sqrt(min Im Q) and an integer window covering relative tails below 1e-45.
GridSpec default_grid(const GaussianVector& f, double spacing);

SampledVector sample(const GaussianVector& f, const GridSpec& grid);

/// (π_h f)(r) = exp(2πi⟨r, ĥ⟩ + πi⟨h_M, ĥ⟩) f(r + h_M). The finite part is left untouched.
ModuleVector apply_pi(const LatticeElement& h, const ModuleVector& f);
GaussianVector apply_pi(const LatticeElement& h, const GaussianVector& f);
SampledVector apply_pi(const LatticeElement& h, const SampledVector& f);

/// U_j = π_{Φe_j}, tensored with W_j when the embedding carries a finite part.
ModuleVector apply_generator(const EmbeddingMap& phi, int j, const ModuleVector& f);

/// The finite-part operator W_j on Z_m1 x Z_m2.
FiniteVector apply_finite_generator(const FinitePart& part, int j, const FiniteVector& v);

/// Mean of (U_i U_j f)/(U_j U_i f) over points where |U_j U_i f| > 1e-8, with products read as
/// the right action of the algebra (f·U_jU_i = U_i(U_j f)). Equals exp(2πiθ_ij).
cplx measure_commutation_phase(const EmbeddingMap& phi, int i, int j, const SampledVector& f);
cplx measure_commutation_phase(const EmbeddingMap& phi, int i, int j, const GaussianVector& f,
                               const GridSpec& grid);

struct ConnectionSet {
    EmbeddingKind kind = EmbeddingKind::Lattice;
    /// A = Φ_inf^{-1} (vector kind) or B from Σ_k B_ik x_kj = δ_ij (lattice kind).
    Eigen::Matrix4d coefficients = Eigen::Matrix4d::Zero();
    Eigen::Matrix2d b = Eigen::Matrix2d::Zero();  // m^{-1}, lattice kind

    /// Multiplier weights of ∇_i on (s1, s2) or (s, n1, n2); ∇_i f = −2πi(weights·x) f + Σ deriv ∂f.
    std::array<double, 3> multiplier(int i) const;
    /// Derivative weights of ∇_i along the continuous axes.
    std::array<double, 2> derivative(int i) const;
};

ConnectionSet build_connections(const EmbeddingMap& phi);

/// Pointwise operator calculus used by the residual checks.
using Field = std::function<cplx(const ModulePoint&)>;

Field as_field(const ModuleVector& f);
Field generator_field(const EmbeddingMap& phi, int j, Field f);
/// ∇_i F with derivatives from fourth-order central differences of step h.
Field connection_field(const ConnectionSet& conn, int i, Field f, double h);
cplx central_difference(const Field& f, const ModulePoint& x, int axis, double h);

/// Options for residual checks on closed-form vectors: sample points from `grid`,
/// derivatives with step `fd_step`.
struct ResidualGrid {
    GridSpec grid;
    double fd_step = 1e-3;
};

/// max_x |([∇_i, U_j] − 2πi δ_ij U_j) f| / max_x |U_j f|.
double connection_commutator_residual(const EmbeddingMap& phi, int i, int j, const GaussianVector& f,
                                      const ResidualGrid& grid);
/// Sampled input: the derivative step equals the grid spacing and only interior points are used.
double connection_commutator_residual(const EmbeddingMap& phi, int i, int j, const SampledVector& f);

/// Visits every sample point of a grid: continuous axes, then the integer window, then Z_m1 x Z_m2.
/// `continuous_margin` cells and `discrete_margin` integers are dropped at each boundary.
void for_each_grid_point(EmbeddingKind kind, const GridSpec& grid, const std::function<void(const ModulePoint&)>& fn,
                         int continuous_margin = 0, int discrete_margin = 0, int finite_m1 = 1, int finite_m2 = 1);

}  // namespace nctheta
