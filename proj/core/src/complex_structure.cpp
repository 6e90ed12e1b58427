#include "nctheta/complex_structure.hpp"

#include "nctheta/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nctheta {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSymmetryTolerance = 1e-12;
constexpr double kMask = 1e-8;

}  // namespace

FullOmega make_full_structure(const Eigen::Matrix2cd& tau, double theta1, double theta2) {
    if (!(theta1 > 0.0) || !(theta2 > 0.0)) {
        throw Error(ErrorCode::NonPositiveDeformation, "theta1 and theta2 must be > 0");
    }
    FullOmega s;
    s.tau = tau;
    s.theta1 = theta1;
    s.theta2 = theta2;
    s.omega << tau(0, 0) / theta1, tau(0, 1) / theta2, tau(1, 0) / theta1, tau(1, 1) / theta2;
    const double scale = std::max(1.0, s.omega.cwiseAbs().maxCoeff());
    if (std::abs(s.omega(0, 1) - s.omega(1, 0)) > kSymmetryTolerance * scale) {
        throw Error(ErrorCode::ConsistencyViolated, "Omega is not symmetric: tau12/theta2 must equal tau21/theta1");
    }
    // Symmetrize exactly so downstream forms see Ω = Ωᵗ.
    const cplx off = 0.5 * (s.omega(0, 1) + s.omega(1, 0));
    s.omega(0, 1) = off;
    s.omega(1, 0) = off;
    const Eigen::Matrix2d y = s.omega.imag();
    if (!(y(0, 0) > 0.0) || !(y.determinant() > 0.0)) {
        throw Error(ErrorCode::NotPositive, "Im Omega must be positive definite");
    }
    return s;
}

PartialT make_partial_structure(cplx tau, double theta1, double theta2, std::optional<double> lattice_decay) {
    if (!(theta1 > 0.0) || !(theta2 > 0.0)) {
        throw Error(ErrorCode::NonPositiveDeformation, "theta1 and theta2 must be > 0");
    }
    PartialT s;
    s.tau = tau;
    s.theta1 = theta1;
    s.t = tau / theta1;
    s.theta2 = theta2;
    s.lattice_decay = lattice_decay.value_or(1.0 / theta2);
    if (!(s.t.imag() > 0.0)) throw Error(ErrorCode::NotPositive, "Im T must be > 0");
    if (!(s.lattice_decay > 0.0)) throw Error(ErrorCode::NotPositive, "lattice decay must be > 0");
    return s;
}

ComplexStructure make_complex_structure(const EmbeddingMap& phi, const Eigen::Matrix2cd& tau,
                                        std::optional<double> lattice_decay) {
    if (phi.kind() == EmbeddingKind::VectorSpace) {
        const auto& x = phi.entries();
        return make_full_structure(tau, x(0, 0), x(1, 2));
    }
    return make_partial_structure(tau(0, 0), phi.params().theta1, commutation_matrix(phi)(2, 3), lattice_decay);
}

EmbeddingKind kind_of(const ComplexStructure& cs) {
    return std::holds_alternative<FullOmega>(cs) ? EmbeddingKind::VectorSpace : EmbeddingKind::Lattice;
}

HermitianFormContext form_context(const ComplexStructure& cs) {
    if (const auto* f = std::get_if<FullOmega>(&cs)) return HermitianFormContext::matrix(f->omega);
    return HermitianFormContext::scalar(std::get<PartialT>(cs).t);
}

GaussianVector theta_vector(const ComplexStructure& cs) {
    GaussianVector g;
    if (const auto* f = std::get_if<FullOmega>(&cs)) {
        g.kind = EmbeddingKind::VectorSpace;
        g.quadratic = f->omega;
        return g;
    }
    const auto& p = std::get<PartialT>(cs);
    g.kind = EmbeddingKind::Lattice;
    g.quadratic(0, 0) = p.t;
    g.lattice_decay = p.lattice_decay;
    return g;
}

double holomorphy_residual(const ModuleVector& f, const ComplexStructure& cs, const EmbeddingMap& phi,
                           const ResidualGrid& grid) {
    if (kind_of(f) != phi.kind() || kind_of(cs) != phi.kind()) {
        throw Error(ErrorCode::KindMismatch, "vector, structure and embedding kinds differ");
    }
    const ConnectionSet conn = build_connections(phi);
    const Field field = as_field(f);
    const double h = grid.fd_step;
    std::vector<Field> nabla;
    for (int i = 1; i <= 4; ++i) nabla.push_back(connection_field(conn, i, field, h));

    // Each antiholomorphic operator as weights on (∇1, ∇2, ∇3, ∇4).
    std::vector<std::array<cplx, 4>> bars;
    if (const auto* full = std::get_if<FullOmega>(&cs)) {
        bars.push_back({full->tau(0, 0), 1.0, full->tau(0, 1), 0.0});
        bars.push_back({full->tau(1, 0), 0.0, full->tau(1, 1), 1.0});
    } else {
        bars.push_back({std::get<PartialT>(cs).tau, 1.0, 0.0, 0.0});
    }

    double worst = 0.0;
    double scale = 0.0;
    for_each_grid_point(phi.kind(), grid.grid, [&](const ModulePoint& x) {
        scale = std::max(scale, std::abs(field(x)));
        for (const auto& w : bars) {
            cplx v{};
            for (int i = 0; i < 4; ++i) {
                if (w[static_cast<std::size_t>(i)] != cplx{}) v += w[static_cast<std::size_t>(i)] * nabla[static_cast<std::size_t>(i)](x);
            }
            worst = std::max(worst, std::abs(v));
        }
    });
    if (!(scale > 0.0)) throw Error(ErrorCode::DegenerateTestVector, "test vector vanishes on the grid");
    return worst / scale;
}

double lattice_direction_residual(const ModuleVector& f, const EmbeddingMap& phi, cplx c3, cplx c4,
                                  const GridSpec& grid) {
    if (phi.kind() != EmbeddingKind::Lattice || kind_of(f) != EmbeddingKind::Lattice) {
        throw Error(ErrorCode::KindMismatch, "lattice-direction residual needs the lattice embedding");
    }
    const ConnectionSet conn = build_connections(phi);
    const Field field = as_field(f);
    const Field n3 = connection_field(conn, 3, field, grid.spacing);
    const Field n4 = connection_field(conn, 4, field, grid.spacing);

    double peak = 0.0;
    for_each_grid_point(phi.kind(), grid, [&](const ModulePoint& x) { peak = std::max(peak, std::abs(field(x))); });
    if (!(peak > 0.0)) throw Error(ErrorCode::DegenerateTestVector, "test vector vanishes on the grid");

    double worst = 0.0;
    for_each_grid_point(phi.kind(), grid, [&](const ModulePoint& x) {
        const double fx = std::abs(field(x));
        if (fx <= kMask * peak) return;
        worst = std::max(worst, std::abs(c3 * n3(x) + c4 * n4(x)) / fx);
    });
    return worst;
}

// ---------------------------------------------------------------------------------------------
// Laurent polynomials

LaurentPolynomial LaurentPolynomial::constant(long long c) {
    LaurentPolynomial p;
    p.add_term(Exponents{}, c);
    return p;
}

LaurentPolynomial LaurentPolynomial::variable(int index, int power) {
    Exponents e{};
    e.at(static_cast<std::size_t>(index)) = power;
    return monomial(1, e);
}

LaurentPolynomial LaurentPolynomial::monomial(long long c, const Exponents& e) {
    LaurentPolynomial p;
    p.add_term(e, c);
    return p;
}

void LaurentPolynomial::add_term(const Exponents& e, long long c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

LaurentPolynomial operator+(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    LaurentPolynomial r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
}

LaurentPolynomial operator-(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    LaurentPolynomial r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
    return r;
}

LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    LaurentPolynomial r;
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            LaurentPolynomial::Exponents e{};
            for (int i = 0; i < LaurentPolynomial::kVariables; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

LaurentPolynomial LaurentPolynomial::inverse_monomial() const {
    if (!is_monomial() || std::abs(terms_.begin()->second) != 1) {
        throw Error(ErrorCode::InternalIdentityViolated, "only unit monomials are invertible");
    }
    Exponents e = terms_.begin()->first;
    for (auto& v : e) v = -v;
    return monomial(terms_.begin()->second, e);
}

int LaurentPolynomial::degree_in(int index) const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[static_cast<std::size_t>(index)]);
    return d;
}

LaurentPolynomial LaurentPolynomial::coefficient_of(int index, int power) const {
    LaurentPolynomial r;
    for (const auto& [e, c] : terms_) {
        if (e[static_cast<std::size_t>(index)] != power) continue;
        Exponents rest = e;
        rest[static_cast<std::size_t>(index)] = 0;
        r.add_term(rest, c);
    }
    return r;
}

LaurentPolynomial LaurentPolynomial::substitute(int index, const LaurentPolynomial& value) const {
    LaurentPolynomial r;
    for (const auto& [e, c] : terms_) {
        const int power = e[static_cast<std::size_t>(index)];
        if (power < 0) throw Error(ErrorCode::InternalIdentityViolated, "cannot substitute into a negative power");
        Exponents rest = e;
        rest[static_cast<std::size_t>(index)] = 0;
        LaurentPolynomial term = monomial(c, rest);
        for (int k = 0; k < power; ++k) term = term * value;
        r = r + term;
    }
    return r;
}

cplx LaurentPolynomial::evaluate(const std::array<cplx, kVariables>& values) const {
    cplx sum{};
    for (const auto& [e, c] : terms_) {
        cplx t = static_cast<double>(c);
        for (int i = 0; i < kVariables; ++i) {
            if (e[i] != 0) t *= std::pow(values[static_cast<std::size_t>(i)], e[i]);
        }
        sum += t;
    }
    return sum;
}

std::string LaurentPolynomial::to_string(const std::array<std::string, kVariables>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        long long mag = c < 0 ? -c : c;
        if (first) {
            if (c < 0) out << "-";
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        first = false;
        bool any = false;
        if (mag != 1) {
            out << mag;
            any = true;
        }
        for (int i = 0; i < kVariables; ++i) {
            if (e[i] == 0) continue;
            if (any) out << "*";
            out << names[static_cast<std::size_t>(i)];
            if (e[i] != 1) out << "^" << e[i];
            any = true;
        }
        if (!any) out << mag;
    }
    return out.str();
}

const std::array<std::string, LaurentPolynomial::kVariables>& nogo_variable_names() {
    static const std::array<std::string, LaurentPolynomial::kVariables> names{
        "tau11", "tau12", "tau21", "tau22", "theta1", "b11", "b12", "b21", "b22"};
    return names;
}

namespace {

/// Solves p = 0 for a variable appearing linearly with a unit-monomial coefficient.
LaurentPolynomial solve_linear(const LaurentPolynomial& p, int variable) {
    if (p.degree_in(variable) != 1) {
        throw Error(ErrorCode::InternalIdentityViolated, "relation is not linear in the eliminated variable");
    }
    const LaurentPolynomial a = p.coefficient_of(variable, 1);
    const LaurentPolynomial rest = p - a * LaurentPolynomial::variable(variable);
    return LaurentPolynomial::constant(0) - rest * a.inverse_monomial();
}

}  // namespace

InfeasibilityCertificate holomorphic_feasibility(const EmbeddingMap& phi, const Eigen::Matrix2cd& tau) {
    if (phi.kind() != EmbeddingKind::Lattice) {
        throw Error(ErrorCode::KindMismatch, "the no-go certificate concerns the lattice embedding");
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (tau(i, j) == cplx{}) {
                throw Error(ErrorCode::DegenerateTau, "tau" + std::to_string(i + 1) + std::to_string(j + 1) +
                                                          " = 0; the elimination divides by it");
            }

    using P = LaurentPolynomial;
    const auto& names = nogo_variable_names();
    InfeasibilityCertificate cert;

    // Holomorphy equations, written as (a_s s + a_1 n1 + a_2 n2) f = a_d ∂f with the common 2πi dropped:
    //   eq1: a = (τ11/θ1, b11, b12), a_d = τ12
    //   eq2: a = (τ21/θ1, b21, b22), a_d = τ22
    const P inv_theta = P::variable(kTheta1, -1);
    const std::array<P, 4> eq1{P::variable(kTau11) * inv_theta, P::variable(kB11), P::variable(kB12),
                               P::variable(kTau12)};
    const std::array<P, 4> eq2{P::variable(kTau21) * inv_theta, P::variable(kB21), P::variable(kB22),
                               P::variable(kTau22)};
    cert.trace.push_back("eq1: (" + eq1[0].to_string(names) + ") s + (" + eq1[1].to_string(names) + ") n1 + (" +
                         eq1[2].to_string(names) + ") n2 = (" + eq1[3].to_string(names) + ") d/ds");
    cert.trace.push_back("eq2: (" + eq2[0].to_string(names) + ") s + (" + eq2[1].to_string(names) + ") n1 + (" +
                         eq2[2].to_string(names) + ") n2 = (" + eq2[3].to_string(names) + ") d/ds");

    // tau22*eq1 - tau12*eq2 removes the derivative; the remaining multiplier must vanish identically.
    std::array<P, 4> combined;
    for (int c = 0; c < 4; ++c) combined[c] = eq2[3] * eq1[c] - eq1[3] * eq2[c];
    if (!combined[3].is_zero()) throw Error(ErrorCode::InternalIdentityViolated, "derivative did not cancel");
    cert.trace.push_back("tau22*eq1 - tau12*eq2: derivative term cancels; coefficients of s, n1, n2 must vanish");

    const P rel_s = combined[0] * P::variable(kTheta1);
    const P b21 = solve_linear(combined[1], kB21);
    const P b12 = solve_linear(combined[2], kB12);
    cert.trace.push_back("s:  " + rel_s.to_string(names) + " = 0");
    cert.trace.push_back("n1: " + combined[1].to_string(names) + " = 0  =>  b21 = " + b21.to_string(names));
    cert.trace.push_back("n2: " + combined[2].to_string(names) + " = 0  =>  b12 = " + b12.to_string(names));

    const P det = P::variable(kB11) * P::variable(kB22) - P::variable(kB12) * P::variable(kB21);
    const P det_sub = det.substitute(kB21, b21).substitute(kB12, b12);
    cert.trace.push_back("det(b) = " + det.to_string(names) + " -> " + det_sub.to_string(names));
    cert.determinant = det_sub;
    cert.determinant_identically_zero = det_sub.is_zero();

    // Numeric view at the supplied τ and the embedding's b = m^{-1}, with b12, b21 forced by the relations.
    const Eigen::Matrix2d b = phi.inverse_m();
    std::array<cplx, P::kVariables> values{};
    values[kTau11] = tau(0, 0);
    values[kTau12] = tau(0, 1);
    values[kTau21] = tau(1, 0);
    values[kTau22] = tau(1, 1);
    values[kTheta1] = phi.params().theta1;
    values[kB11] = b(0, 0);
    values[kB22] = b(1, 1);
    values[kB12] = b12.evaluate(values);
    values[kB21] = b21.evaluate(values);

    cert.relations.push_back({"tau11*tau22 = tau12*tau21", P::variable(kTau11) * P::variable(kTau22),
                              P::variable(kTau12) * P::variable(kTau21), 0.0});
    cert.relations.push_back({"b12 = (tau12/tau22)*b22", P::variable(kB12), b12, 0.0});
    cert.relations.push_back({"b21 = (tau22/tau12)*b11", P::variable(kB21), b21, 0.0});
    for (auto& r : cert.relations) r.numeric_residual = std::abs(r.lhs.evaluate(values) - r.rhs.evaluate(values));

    cert.det_b_from_m = b.determinant();
    cert.infeasible = cert.determinant_identically_zero && cert.det_b_from_m != 0.0;
    cert.trace.push_back("det(m^-1) = " + std::to_string(cert.det_b_from_m) +
                         (cert.infeasible ? " != 0: contradiction, no fully holomorphic vector" : ""));
    return cert;
}

}  // namespace nctheta
