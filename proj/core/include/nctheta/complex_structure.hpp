#pragma once

#include "nctheta/heisenberg_module.hpp"
#include "nctheta/lattice_embedding.hpp"
#include "nctheta/special_functions.hpp"

#include <Eigen/Dense>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nctheta {

/// Vector case: Ω = [[τ11/θ1, τ12/θ2], [τ21/θ1, τ22/θ2]].
struct FullOmega {
    Eigen::Matrix2cd tau = Eigen::Matrix2cd::Zero();
    double theta1 = 0.0;
    double theta2 = 0.0;
    Eigen::Matrix2cd omega = Eigen::Matrix2cd::Zero();
};

/// Lattice case: T = τ/θ1 on the continuous variable, exp(−π c |n|²) on Z².
struct PartialT {
    cplx tau{0.0, 1.0};
    double theta1 = 0.0;
    cplx t{0.0, 1.0};
    double theta2 = 0.0;
    double lattice_decay = 0.0;
};

using ComplexStructure = std::variant<FullOmega, PartialT>;

/// Throws ConsistencyViolated when Ω is not symmetric, NotPositive when Im Ω is not positive definite.
FullOmega make_full_structure(const Eigen::Matrix2cd& tau, double theta1, double theta2);
/// Throws NotPositive unless Im T > 0, θ2 > 0 and the decay is positive. Decay defaults to 1/θ2.
PartialT make_partial_structure(cplx tau, double theta1, double theta2, std::optional<double> lattice_decay = {});

/// Structure matched to an embedding: θ1, θ2 are the diagonal entries of Φ_inf (vector kind)
/// or θ1 and θ34 (lattice kind, where only tau(0,0) is used).
ComplexStructure make_complex_structure(const EmbeddingMap& phi, const Eigen::Matrix2cd& tau,
                                        std::optional<double> lattice_decay = {});

EmbeddingKind kind_of(const ComplexStructure& cs);

HermitianFormContext form_context(const ComplexStructure& cs);

/// exp(πi SᵗΩS) or exp(πi T s² − π c |n|²).
GaussianVector theta_vector(const ComplexStructure& cs);

/// max over the grid of the antiholomorphic residuals, relative to max |f|:
/// vector kind both τ11∇1 + ∇2 + τ12∇3 and τ21∇1 + τ22∇3 + ∇4; lattice kind τ∇1 + ∇2 only.
double holomorphy_residual(const ModuleVector& f, const ComplexStructure& cs, const EmbeddingMap& phi,
                           const ResidualGrid& grid);

/// Lattice kind: max over points with |f| > 1e-8·max|f| of |(c3∇3 + c4∇4) f| / |f|.
double lattice_direction_residual(const ModuleVector& f, const EmbeddingMap& phi, cplx c3, cplx c4,
                                  const GridSpec& grid);

/// Polynomial with integer coefficients in variables that may carry negative exponents.
class LaurentPolynomial {
public:
    static constexpr int kVariables = 9;
    using Exponents = std::array<int, kVariables>;

    LaurentPolynomial() = default;
    static LaurentPolynomial constant(long long c);
    static LaurentPolynomial variable(int index, int power = 1);
    static LaurentPolynomial monomial(long long c, const Exponents& e);

    bool is_zero() const noexcept { return terms_.empty(); }
    /// Single-term polynomial (invertible in the Laurent ring when the coefficient is ±1).
    bool is_monomial() const noexcept { return terms_.size() == 1; }
    const std::map<Exponents, long long>& terms() const noexcept { return terms_; }

    /// Inverse of a monomial with coefficient ±1; throws InternalIdentityViolated otherwise.
    LaurentPolynomial inverse_monomial() const;
    /// Degree of the polynomial in one variable (max exponent); 0 for a constant.
    int degree_in(int index) const;
    /// Coefficient of variable^power, as a polynomial in the remaining variables.
    LaurentPolynomial coefficient_of(int index, int power) const;
    /// Replaces a variable (appearing with non-negative powers) by a polynomial.
    LaurentPolynomial substitute(int index, const LaurentPolynomial& value) const;

    cplx evaluate(const std::array<cplx, kVariables>& values) const;
    std::string to_string(const std::array<std::string, kVariables>& names) const;

    friend LaurentPolynomial operator+(const LaurentPolynomial& a, const LaurentPolynomial& b);
    friend LaurentPolynomial operator-(const LaurentPolynomial& a, const LaurentPolynomial& b);
    friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b);
    friend bool operator==(const LaurentPolynomial& a, const LaurentPolynomial& b) = default;

private:
    void add_term(const Exponents& e, long long c);
    std::map<Exponents, long long> terms_;
};

/// Variable slots used by the no-go derivation.
enum NoGoVariable : int { kTau11, kTau12, kTau21, kTau22, kTheta1, kB11, kB12, kB21, kB22 };

const std::array<std::string, LaurentPolynomial::kVariables>& nogo_variable_names();

struct DerivedRelation {
    std::string statement;
    LaurentPolynomial lhs;
    LaurentPolynomial rhs;
    double numeric_residual = 0.0;  // |lhs − rhs| at the supplied τ, θ1 and b
};

struct InfeasibilityCertificate {
    /// τ11τ22 − τ12τ21 = 0 (s-coefficient), b21 = τ22 b11/τ12, b12 = τ12 b22/τ22.
    std::vector<DerivedRelation> relations;
    LaurentPolynomial determinant;  // det(b) after substitution
    bool determinant_identically_zero = false;
    double det_b_from_m = 0.0;      // det(m^{-1}) for the embedding; nonzero
    bool infeasible = false;
    std::vector<std::string> trace;
};

/// Fully complexified holomorphy on a lattice embedding: the two antiholomorphic equations are
/// consistent only if det(b) = 0, contradicting b = m^{-1}. Zero τ entries throw DegenerateTau.
InfeasibilityCertificate holomorphic_feasibility(const EmbeddingMap& phi, const Eigen::Matrix2cd& tau);

}  // namespace nctheta
