#include "nctheta/quantum_theta.hpp"

#include "nctheta/error.hpp"
#include "nctheta/parallel.hpp"
#include "nctheta/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace nctheta {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

ContinuousPart continuous_part(const LatticeElement& h) {
    if (h.kind == EmbeddingKind::Lattice) return ContinuousPart::scalar(h.w1(), h.w2());
    ContinuousPart p;
    p.first << h.position[0], h.position[1];
    p.second << h.dual[0], h.dual[1];
    return p;
}

std::string index_label(const LatticeIndex& k) {
    std::ostringstream out;
    out << "(" << k[0] << "," << k[1] << "," << k[2] << "," << k[3] << ")";
    return out.str();
}

bool is_canonical_theta_vector(const ComplexStructure& cs, const GaussianVector& f) {
    const GaussianVector ref = theta_vector(cs);
    if (f.kind != ref.kind || f.finite) return false;
    if (f.constant != cplx{} || !f.linear.isZero(0.0) || !f.lattice_linear.isZero(0.0)) return false;
    if (f.kind == EmbeddingKind::Lattice) {
        return f.quadratic(0, 0) == ref.quadratic(0, 0) && f.lattice_decay == ref.lattice_decay;
    }
    return f.quadratic == ref.quadratic;
}

}  // namespace

std::optional<std::size_t> QuantumThetaSeries::position(const LatticeIndex& k) const {
    if (sup_norm(k) > radius) return std::nullopt;
    // Indices are grouped by norm shell; within a shell they are lexicographic.
    auto it = std::lower_bound(indices.begin(), indices.end(), k, [](const LatticeIndex& a, const LatticeIndex& b) {
        const int na = sup_norm(a);
        const int nb = sup_norm(b);
        return na != nb ? na < nb : a < b;
    });
    if (it == indices.end() || *it != k) return std::nullopt;
    return static_cast<std::size_t>(it - indices.begin());
}

cplx QuantumThetaSeries::coefficient(const LatticeIndex& k) const {
    const auto pos = position(k);
    if (!pos) throw Error(ErrorCode::TruncationTooSmall, "index " + index_label(k) + " lies outside the truncation");
    return coefficients[*pos];
}

double b_factor_theta2(const PartialT& s) { return 1.0 / s.lattice_decay; }

cplx b_tilde(const PartialT& s, const LatticeElement& g) {
    const double th2 = b_factor_theta2(s);
    return b_factor(g.t1(), g.m1(), th2) * b_factor(g.t2(), g.m2(), th2);
}

cplx inner_product_closed(const ComplexStructure& cs, const GaussianVector& f, const LatticeElement& h) {
    if (!is_canonical_theta_vector(cs, f)) {
        throw Error(ErrorCode::UnsupportedVector, "closed form applies only to the structure's theta vector");
    }
    if (h.kind != kind_of(cs)) throw Error(ErrorCode::KindMismatch, "lattice element and structure kinds differ");
    const HermitianFormContext ctx = form_context(cs);
    const cplx g = gaussian_factor(ctx, continuous_part(h));
    if (const auto* p = std::get_if<PartialT>(&cs)) return b_tilde(*p, h) * g;
    return g;
}

namespace {

/// Σ_n d_f(n)·conj(d_g(n)) over a box covering both Gaussian centres with relative tail < tol.
cplx discrete_overlap(const GaussianVector& f, const GaussianVector& g, double tol) {
    const double d = std::min(f.lattice_decay, g.lattice_decay);
    if (!(d > 0.0)) throw Error(ErrorCode::DivergentIntegral, "lattice factor does not decay");
    const int width = static_cast<int>(std::ceil(std::sqrt(std::log(10.0 / tol) / (kPi * d)))) + 2;
    std::array<std::int64_t, 2> lo{};
    std::array<std::int64_t, 2> hi{};
    for (int a = 0; a < 2; ++a) {
        // |d_g(n)| peaks at Re u_g / d_g.
        const double cf = f.lattice_linear(a).real() / f.lattice_decay;
        const double cg = g.lattice_linear(a).real() / g.lattice_decay;
        lo[a] = static_cast<std::int64_t>(std::floor(std::min(cf, cg))) - width;
        hi[a] = static_cast<std::int64_t>(std::ceil(std::max(cf, cg))) + width;
    }
    cplx sum{};
    for (std::int64_t n1 = lo[0]; n1 <= hi[0]; ++n1)
        for (std::int64_t n2 = lo[1]; n2 <= hi[1]; ++n2)
            sum += f.discrete_factor({n1, n2}) * std::conj(g.discrete_factor({n1, n2}));
    return sum;
}

}  // namespace

cplx inner_product_oracle(const GaussianVector& f, const LatticeElement& h, double tol) {
    const GaussianVector g = apply_pi(h, f);
    // f(x)·conj(g(x)) = exp(κ_f + conj κ_g)·[continuous]·[discrete].
    const cplx constant = std::exp(f.constant + std::conj(g.constant));
    const Eigen::Matrix2cd q = f.quadratic - g.quadratic.conjugate();
    const Eigen::Vector2cd l = f.linear - g.linear.conjugate();

    cplx continuous{};
    if (f.continuous_dim() == 1) {
        continuous = gaussian_quadrature_oracle(q(0, 0), l(0), 0.0, tol);
    } else if (f.diagonal_quadratic() && g.diagonal_quadratic()) {
        continuous = gaussian_quadrature_oracle(q(0, 0), l(0), 0.0, tol) *
                     gaussian_quadrature_oracle(q(1, 1), l(1), 0.0, tol);
    } else {
        const Eigen::Matrix2d y = 0.5 * (q.imag() + q.imag().transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(y);
        const double lambda = es.eigenvalues().minCoeff();
        if (!(lambda > 0.0)) throw Error(ErrorCode::DivergentIntegral, "Im of the quadratic form is not definite");
        const Eigen::Vector2d center = -y.inverse() * l.imag();
        auto integrand = [&](double s1, double s2) {
            const cplx quad = q(0, 0) * s1 * s1 + (q(0, 1) + q(1, 0)) * s1 * s2 + q(1, 1) * s2 * s2;
            return std::exp(kI * kPi * quad + 2.0 * kI * kPi * (l(0) * s1 + l(1) * s2));
        };
        auto inner = [&](double s1) {
            const double c2 = -(y(1, 0) * s1 + l(1).imag()) / y(1, 1);
            return integrate_gaussian_envelope([&](double s2) { return integrand(s1, s2); }, c2, y(1, 1), tol).value;
        };
        continuous = integrate_gaussian_envelope(inner, center(0), lambda, tol).value;
    }

    cplx discrete{1.0, 0.0};
    if (f.discrete_dim() == 2) discrete = discrete_overlap(f, g, tol);

    cplx finite{1.0, 0.0};
    if (f.finite && g.finite) {
        finite = 0.0;
        for (std::size_t i = 0; i < f.finite->values.size(); ++i)
            finite += f.finite->values[i] * std::conj(g.finite->values[i]);
    }
    return constant * continuous * discrete * finite;
}

namespace {

cplx coefficient_at(const EmbeddingMap& phi, const ComplexStructure& cs, const HermitianFormContext& ctx,
                    const LatticeElement& g) {
    const ContinuousPart w = continuous_part(g);
    const cplx gauss = std::exp(-0.5 * kPi * hermitian_form(ctx, w, w));
    (void)phi;
    if (const auto* p = std::get_if<PartialT>(&cs)) return b_tilde(*p, g) * gauss;
    return gauss;
}

}  // namespace

QuantumThetaSeries quantum_theta_series(const EmbeddingMap& phi, const ComplexStructure& cs, int radius) {
    if (radius < 1) throw Error(ErrorCode::TruncationTooSmall, "series radius must be >= 1");
    if (kind_of(cs) != phi.kind()) throw Error(ErrorCode::KindMismatch, "structure and embedding kinds differ");
    QuantumThetaSeries s{phi, cs, form_context(cs), radius, 0.0, enumerate_indices(radius), {}, 0.0, 0.0};
    s.normalization = s.form.normalization();
    s.coefficients.assign(s.indices.size(), cplx{});
    parallel_for(s.indices.size(), [&](std::size_t i) {
        s.coefficients[i] = coefficient_at(phi, cs, s.form, lattice_element(phi, s.indices[i]));
    });

    const GaussianVector f = theta_vector(cs);
    const int check_radius = std::min(radius, 2);
    for (std::size_t i = 0; i < s.indices.size() && sup_norm(s.indices[i]) <= check_radius; ++i) {
        const cplx closed = inner_product_closed(cs, f, lattice_element(phi, s.indices[i]));
        s.reassembly_deviation = std::max(s.reassembly_deviation, std::abs(s.normalization * s.coefficients[i] - closed));
    }
    s.tail_bound = tail_bound(phi, cs, radius);
    return s;
}

cplx c_factor(const QuantumThetaSeries& series, const LatticeElement& g) {
    return coefficient_at(series.embedding, series.structure, series.form, g);
}

cplx translation_factor(const QuantumThetaSeries& series, const LatticeElement& g, const LatticeElement& h) {
    if (series.embedding.kind() == EmbeddingKind::VectorSpace) {
        return std::exp(-kPi * hermitian_form(series.form, continuous_part(g), continuous_part(h)));
    }
    const cplx denom = c_factor(series, g) * c_factor(series, h) * cocycle_alpha(g, h);
    if (std::abs(denom) == 0.0 || !std::isfinite(std::abs(denom))) {
        throw Error(ErrorCode::InternalIdentityViolated,
                    "C_g C_h vanishes for g = " + index_label(g.k) + ", h = " + index_label(h.k));
    }
    return c_factor(series, g + h) / denom;
}

BasisProduct basis_multiply(const LatticeIndex& k1, const LatticeIndex& k2, const EmbeddingMap& phi) {
    return {cocycle_alpha(lattice_element(phi, k1), lattice_element(phi, k2)), k1 + k2};
}

void VerificationReport::finalize() {
    if (residuals.empty()) {
        statistic = std::numeric_limits<double>::quiet_NaN();
        pass = false;
        return;
    }
    if (bound == Bound::AtMost) {
        statistic = 0.0;
        for (const auto& [label, v] : residuals) statistic = std::isnan(v) ? v : std::max(statistic, v);
        pass = statistic <= tolerance;
    } else {
        statistic = std::numeric_limits<double>::infinity();
        for (const auto& [label, v] : residuals) statistic = std::isnan(v) ? v : std::min(statistic, v);
        pass = statistic >= tolerance;
    }
}

VerificationReport verify_functional_equation(const QuantumThetaSeries& series, const LatticeElement& g,
                                              double tolerance) {
    const int ng = sup_norm(g.k);
    if (2 * ng > series.radius) {
        throw Error(ErrorCode::TruncationTooSmall, "translation " + index_label(g.k) + " needs radius >= " +
                                                       std::to_string(2 * ng));
    }
    VerificationReport r;
    r.name = "functional_equation";
    r.tolerance = tolerance;
    r.metadata["g"] = g.k;
    r.metadata["radius"] = series.radius;
    const cplx cg = c_factor(series, g);
    const int interior = series.radius - ng;
    double worst = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < series.indices.size(); ++i) {
        const LatticeIndex& kh = series.indices[i];
        const LatticeIndex kgh = g.k + kh;
        if (sup_norm(kgh) > interior) continue;
        const LatticeElement h = lattice_element(series.embedding, kh);
        const BasisProduct prod = basis_multiply(g.k, kh, series.embedding);
        const cplx lhs = cg * series.coefficients[i] * prod.phase * translation_factor(series, g, h);
        const double res = std::abs(lhs - series.coefficient(prod.index));
        worst = std::max(worst, res);
        ++count;
    }
    // One aggregated entry keeps reports compact; the count is recorded alongside.
    r.add("interior_max", worst);
    r.metadata["interior_coefficients"] = count;
    r.finalize();
    return r;
}

VerificationReport verify_consistency_condition(const QuantumThetaSeries& series, const LatticeElement& g,
                                                const LatticeElement& h, double tolerance) {
    VerificationReport r;
    r.name = "consistency_condition";
    r.tolerance = tolerance;
    r.metadata["g"] = g.k;
    r.metadata["h"] = h.k;
    const cplx alpha = cocycle_alpha(g, h);
    const cplx lhs = c_factor(series, g + h);
    const cplx rhs = c_factor(series, g) * c_factor(series, h) * translation_factor(series, g, h) * alpha;
    r.add("quotient", std::abs(lhs - rhs));
    if (series.embedding.kind() == EmbeddingKind::VectorSpace) {
        const double im_h = hermitian_form(series.form, continuous_part(g), continuous_part(h)).imag();
        r.add("manin", std::abs(std::exp(kI * kPi * im_h) - alpha));
    }
    r.finalize();
    return r;
}

double additivity_gap(const QuantumThetaSeries& series, const LatticeElement& g1, const LatticeElement& g2,
                      const LatticeElement& h) {
    const cplx ratio = translation_factor(series, g1, h) * translation_factor(series, g2, h) /
                       translation_factor(series, g1 + g2, h);
    return std::abs(ratio - 1.0);
}

DecayBound coefficient_decay(const EmbeddingMap& phi, const ComplexStructure& cs) {
    const HermitianFormContext ctx = form_context(cs);
    // H(h, h) = (Lk)ᵗ Y⁻¹ conj(Lk) with h̲ = L k; real part of Lᵗ Y⁻¹ L̄ is the quadratic form in k.
    Eigen::Matrix<cplx, 2, 4> lmap = Eigen::Matrix<cplx, 2, 4>::Zero();
    Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
    DecayBound bound;
    for (int j = 0; j < 4; ++j) {
        const LatticeElement e = lattice_element(phi, unit_index(j + 1));
        lmap.col(j) = ctx.underline(continuous_part(e));
    }
    const int d = ctx.dim();
    const Eigen::MatrixXcd l = lmap.topRows(d);
    const Eigen::MatrixXd yinv = ctx.im_inverse().topLeftCorner(d, d);
    g = (l.transpose() * yinv.cast<cplx>() * l.conjugate()).real();
    if (const auto* p = std::get_if<PartialT>(&cs)) {
        // |b_{t,m}| <= θ(2ic, 0) exp(−(π/2) c m²).
        Eigen::Matrix<double, 2, 4> mmap = Eigen::Matrix<double, 2, 4>::Zero();
        for (int j = 0; j < 4; ++j) {
            const LatticeElement e = lattice_element(phi, unit_index(j + 1));
            mmap(0, j) = e.position[1];
            mmap(1, j) = e.position[2];
        }
        g += p->lattice_decay * mmap.transpose() * mmap;
        const double th = jacobi_theta({cplx(0.0, 2.0 * p->lattice_decay), 0.0}).value.real();
        bound.prefactor = th * th;
    }
    g = 0.5 * (g + g.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(g);
    bound.lambda_min = es.eigenvalues().minCoeff();
    return bound;
}

double tail_bound(const EmbeddingMap& phi, const ComplexStructure& cs, int radius) {
    const DecayBound b = coefficient_decay(phi, cs);
    if (!(b.lambda_min > 0.0)) return std::numeric_limits<double>::infinity();
    const double a = 0.5 * kPi * b.lambda_min;
    // Σ_{‖k‖∞ > R} exp(−a|k|²) = S⁴ − S_R⁴ with S_R = Σ_{|j| <= R} exp(−a j²); the outer tail is summed directly.
    double inner = 1.0;
    for (int j = 1; j <= radius; ++j) inner += 2.0 * std::exp(-a * j * j);
    double outer = 0.0;
    for (int j = radius + 1;; ++j) {
        const double t = 2.0 * std::exp(-a * j * j);
        outer += t;
        if (t < 1e-30 * inner) break;
    }
    const double s_all = inner + outer;
    // S⁴ − S_R⁴ = (S − S_R)(S + S_R)(S² + S_R²), avoiding cancellation.
    const double diff = outer * (s_all + inner) * (s_all * s_all + inner * inner);
    return b.prefactor * diff;
}

int radius_for_tail(const EmbeddingMap& phi, const ComplexStructure& cs, double target) {
    for (int r = 1; r <= 64; ++r) {
        if (tail_bound(phi, cs, r) < target) return r;
    }
    throw Error(ErrorCode::TruncationTooSmall, "tail target not reached by radius 64");
}

}  // namespace nctheta
