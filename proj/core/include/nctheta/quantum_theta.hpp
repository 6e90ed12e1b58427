#pragma once

#include "nctheta/complex_structure.hpp"
#include "nctheta/heisenberg_module.hpp"
#include "nctheta/lattice_embedding.hpp"
#include "nctheta/special_functions.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nctheta {

/// Truncation of Θ_D (vector kind) or Θ̂_D (lattice kind): coefficients at every ‖k‖∞ <= radius.
struct QuantumThetaSeries {
    EmbeddingMap embedding;
    ComplexStructure structure;
    HermitianFormContext form;
    int radius = 0;
    double normalization = 0.0;
    std::vector<LatticeIndex> indices;  // canonical enumeration order
    std::vector<cplx> coefficients;     // aligned with indices
    /// max |normalization·coefficient − inner_product_closed| over ‖k‖∞ <= min(radius, 2)
    double reassembly_deviation = 0.0;
    /// Upper bound on Σ |coefficient| over ‖k‖∞ > radius.
    double tail_bound = 0.0;

    /// Position of k in `indices`, if inside the truncation.
    std::optional<std::size_t> position(const LatticeIndex& k) const;
    /// Stored coefficient; throws TruncationTooSmall outside the radius.
    cplx coefficient(const LatticeIndex& k) const;
};

/// Effective θ2 of the b-factors: 1 / lattice_decay.
double b_factor_theta2(const PartialT& s);

/// Closed-form ⟨f, π_h f⟩ for the canonical theta vector f of the structure (UnsupportedVector otherwise).
cplx inner_product_closed(const ComplexStructure& cs, const GaussianVector& f, const LatticeElement& h);

/// ⟨f, π_h f⟩ = Σ_n ∫ f · conj(π_h f) by quadrature over the continuous variables and a brute-force
/// integer sum. Uses only pointwise module data, never the closed forms above.
cplx inner_product_oracle(const GaussianVector& f, const LatticeElement& h, double tol = 1e-12);

QuantumThetaSeries quantum_theta_series(const EmbeddingMap& phi, const ComplexStructure& cs, int radius);

/// C_g = exp(−(π/2)H(g̲, g̲)) (vector kind) or Ĉ_g = b̃_g exp(−(π/2)H(w̲_g, w̲_g)) (lattice kind).
cplx c_factor(const QuantumThetaSeries& series, const LatticeElement& g);

/// b̃_g = b_{t1,m1} b_{t2,m2}.
cplx b_tilde(const PartialT& s, const LatticeElement& g);

/// 𝒯_g(h): exp(−πH(g̲, h̲)) (vector kind) or Ĉ_{g+h}/(Ĉ_g Ĉ_h α(g, h)) (lattice kind).
/// A vanishing denominator throws InternalIdentityViolated.
cplx translation_factor(const QuantumThetaSeries& series, const LatticeElement& g, const LatticeElement& h);

struct BasisProduct {
    cplx phase;
    LatticeIndex index;
};

/// e(k1)·e(k2) = α(Φk1, Φk2) e(k1 + k2).
BasisProduct basis_multiply(const LatticeIndex& k1, const LatticeIndex& k2, const EmbeddingMap& phi);

struct VerificationReport {
    enum class Bound { AtMost, AtLeast };

    std::string name;
    std::vector<std::pair<std::string, double>> residuals;
    /// Max residual (AtMost) or min value (AtLeast) over `residuals`.
    double statistic = 0.0;
    double tolerance = 0.0;
    Bound bound = Bound::AtMost;
    bool pass = false;
    nlohmann::json metadata = nlohmann::json::object();

    void add(std::string label, double value) { residuals.emplace_back(std::move(label), value); }
    /// Sets statistic and pass from residuals; an empty residual list fails.
    void finalize();
};

/// Ĉ_g e(g) x_g^*(Θ) = Θ on interior coefficients ‖k_{g+h}‖∞ <= radius − ‖k_g‖∞.
/// Requires ‖k_g‖∞ <= radius/2 (TruncationTooSmall otherwise).
VerificationReport verify_functional_equation(const QuantumThetaSeries& series, const LatticeElement& g,
                                              double tolerance);

/// |C_{g+h} − C_g C_h 𝒯_g(h) α(g, h)|; the vector kind also checks exp(πi Im H(g̲, h̲)) = α(g, h).
VerificationReport verify_consistency_condition(const QuantumThetaSeries& series, const LatticeElement& g,
                                                const LatticeElement& h, double tolerance);

/// |𝒯_{g1}(h) 𝒯_{g2}(h) / 𝒯_{g1+g2}(h) − 1|.
double additivity_gap(const QuantumThetaSeries& series, const LatticeElement& g1, const LatticeElement& g2,
                      const LatticeElement& h);

/// Smallest eigenvalue λ of the real quadratic form G with |coefficient(k)| <= A·exp(−(π/2) kᵗGk).
struct DecayBound {
    double prefactor = 1.0;  // A
    double lambda_min = 0.0;
};

DecayBound coefficient_decay(const EmbeddingMap& phi, const ComplexStructure& cs);

/// Bound on Σ_{‖k‖∞ > radius} |coefficient(k)|.
double tail_bound(const EmbeddingMap& phi, const ComplexStructure& cs, int radius);

/// Smallest radius whose tail bound is below target (throws TruncationTooSmall past 64).
int radius_for_tail(const EmbeddingMap& phi, const ComplexStructure& cs, double target);

}  // namespace nctheta
