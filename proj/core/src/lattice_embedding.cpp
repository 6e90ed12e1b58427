#include "nctheta/lattice_embedding.hpp"

#include "nctheta/error.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>

namespace nctheta {

namespace {

constexpr double kColumnTolerance = 1e-12;

Eigen::MatrixXd vector_space_entries(const EmbeddingParams& p) {
    double shift1 = p.theta1;
    double shift2 = p.theta2;
    if (p.finite_part) {
        // With F present the continuous shifts absorb n_i/m_i so that V ⊗ W keeps phases θ1, θ2.
        shift1 += static_cast<double>(p.finite_part->n1) / p.finite_part->m1;
        shift2 += static_cast<double>(p.finite_part->n2) / p.finite_part->m2;
    }
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(4, 4);
    x(0, 0) = shift1;
    x(1, 2) = shift2;
    x(2, 1) = 1.0;
    x(3, 3) = 1.0;
    return x;
}

Eigen::MatrixXd lattice_entries(const EmbeddingParams& p) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(6, 4);
    x(0, 0) = p.theta1;
    x(1, 2) = p.m(0, 0);
    x(1, 3) = p.m(0, 1);
    x(2, 2) = p.m(1, 0);
    x(2, 3) = p.m(1, 1);
    x(3, 1) = 1.0;
    x(4, 2) = p.delta_hat(0, 0);
    x(4, 3) = p.delta_hat(0, 1);
    x(5, 2) = p.delta_hat(1, 0);
    x(5, 3) = p.delta_hat(1, 1);
    return x;
}

double theta34_of(const EmbeddingParams& p) {
    const auto& m = p.m;
    const auto& d = p.delta_hat;
    return m(0, 0) * d(0, 1) + m(1, 0) * d(1, 1) - m(0, 1) * d(0, 0) - m(1, 1) * d(1, 0);
}

}  // namespace

const char* to_string(EmbeddingKind kind) noexcept {
    return kind == EmbeddingKind::VectorSpace ? "vector" : "lattice";
}

double EmbeddingMap::column_condition(int column) const {
    const int p = position_dim();
    double sum = 0.0;
    for (int k = 0; k < p; ++k) sum += entries_(k, column) * entries_(k + p, column);
    return sum;
}

Eigen::Matrix2d EmbeddingMap::inverse_m() const {
    const auto& m = params_.m;
    const double det = static_cast<double>(m(0, 0)) * m(1, 1) - static_cast<double>(m(0, 1)) * m(1, 0);
    if (det == 0.0) throw Error(ErrorCode::SingularIntegerMatrix, "det(m) = 0");
    Eigen::Matrix2d b;
    b << m(1, 1) / det, -m(0, 1) / det, -m(1, 0) / det, m(0, 0) / det;
    return b;
}

EmbeddingMap build_embedding(const EmbeddingParams& params) {
    if (!(params.theta1 > 0.0)) {
        throw Error(ErrorCode::NonPositiveDeformation, "theta1 must be > 0");
    }
    EmbeddingMap phi;
    phi.params_ = params;

    if (params.kind == EmbeddingKind::VectorSpace) {
        if (!(params.theta2 > 0.0)) {
            throw Error(ErrorCode::NonPositiveDeformation, "theta2 must be > 0");
        }
        if (const auto& f = params.finite_part) {
            if (f->m1 < 1 || f->m2 < 1) {
                throw Error(ErrorCode::NotPositive, "finite part orders m1, m2 must be positive");
            }
            if (std::gcd(f->m1, f->n1) != 1 || std::gcd(f->m2, f->n2) != 1) {
                throw Error(ErrorCode::ConsistencyViolated, "finite part requires gcd(m_i, n_i) = 1");
            }
        }
        phi.entries_ = vector_space_entries(params);
    } else {
        if (params.finite_part) {
            throw Error(ErrorCode::KindMismatch, "finite part is only modelled for the vector-space embedding");
        }
        if (params.m.determinant() == 0) {
            throw Error(ErrorCode::SingularIntegerMatrix, "det(m) = 0");
        }
        phi.entries_ = lattice_entries(params);
    }

    for (int j = 0; j < 4; ++j) {
        const double sum = phi.column_condition(j);
        if (std::abs(sum) > kColumnTolerance) {
            if (!params.allow_invalid) throw EmbeddingConditionError(j + 1, sum);
            phi.column_condition_ok_ = false;
        }
    }

    if (params.kind == EmbeddingKind::Lattice && !(theta34_of(params) > 0.0)) {
        throw Error(ErrorCode::NonPositiveDeformation,
                    "theta34 = " + std::to_string(theta34_of(params)) + " must be > 0");
    }
    return phi;
}

DeformationMatrix commutation_matrix(const EmbeddingMap& phi) {
    const auto& p = phi.params();
    const double t12 = p.theta1;
    const double t34 = phi.kind() == EmbeddingKind::VectorSpace ? p.theta2 : theta34_of(p);
    DeformationMatrix d;
    d.theta(0, 1) = t12;
    d.theta(1, 0) = -t12;
    d.theta(2, 3) = t34;
    d.theta(3, 2) = -t34;
    return d;
}

LatticeElement LatticeElement::operator-() const {
    LatticeElement r = *this;
    for (auto& v : r.k) v = -v;
    for (auto& v : r.position) v = -v;
    for (auto& v : r.dual) v = -v;
    return r;
}

LatticeElement operator+(const LatticeElement& a, const LatticeElement& b) {
    if (a.kind != b.kind) throw Error(ErrorCode::KindMismatch, "adding elements of different embeddings");
    LatticeElement r = a;
    for (int i = 0; i < 4; ++i) r.k[i] += b.k[i];
    for (int i = 0; i < 3; ++i) {
        r.position[i] += b.position[i];
        r.dual[i] += b.dual[i];
    }
    return r;
}

LatticeElement operator-(const LatticeElement& a, const LatticeElement& b) { return a + (-b); }

LatticeElement lattice_element(const EmbeddingMap& phi, const LatticeIndex& k) {
    LatticeElement e;
    e.kind = phi.kind();
    e.k = k;
    const auto& x = phi.entries();
    const int p = phi.position_dim();
    for (int row = 0; row < 2 * p; ++row) {
        double v = 0.0;
        for (int j = 0; j < 4; ++j) v += x(row, j) * k[j];
        if (row < p) {
            e.position[row] = v;
        } else {
            e.dual[row - p] = v;
        }
    }
    return e;
}

LatticeIndex unit_index(int j) {
    LatticeIndex k{};
    k.at(static_cast<std::size_t>(j - 1)) = 1;
    return k;
}

LatticeIndex operator+(const LatticeIndex& a, const LatticeIndex& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

LatticeIndex operator-(const LatticeIndex& a, const LatticeIndex& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

int sup_norm(const LatticeIndex& k) noexcept {
    int r = 0;
    for (int v : k) r = std::max(r, std::abs(v));
    return r;
}

std::vector<LatticeIndex> enumerate_indices(int radius) {
    std::vector<LatticeIndex> out;
    if (radius < 0) return out;
    const int side = 2 * radius + 1;
    out.reserve(static_cast<std::size_t>(side) * side * side * side);
    for (int a = -radius; a <= radius; ++a)
        for (int b = -radius; b <= radius; ++b)
            for (int c = -radius; c <= radius; ++c)
                for (int d = -radius; d <= radius; ++d) out.push_back({a, b, c, d});
    // Generated lexicographically already; a stable sort by norm keeps that as the tie-break.
    std::stable_sort(out.begin(), out.end(),
                     [](const LatticeIndex& x, const LatticeIndex& y) { return sup_norm(x) < sup_norm(y); });
    return out;
}

std::vector<LatticeElement> enumerate_lattice(const EmbeddingMap& phi, int radius) {
    std::vector<LatticeElement> out;
    for (const auto& k : enumerate_indices(radius)) out.push_back(lattice_element(phi, k));
    return out;
}

double pairing(EmbeddingKind kind, std::span<const double> m_part, std::span<const double> dual_part) {
    const std::size_t expected = kind == EmbeddingKind::VectorSpace ? 2 : 3;
    if (m_part.size() != expected || dual_part.size() != expected) {
        throw Error(ErrorCode::KindMismatch, "pairing dimension does not match the embedding kind");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < expected; ++i) sum += m_part[i] * dual_part[i];
    return sum;
}

double cocycle_exponent(const LatticeElement& x, const LatticeElement& y) {
    if (x.kind != y.kind) throw Error(ErrorCode::KindMismatch, "cocycle of elements from different embeddings");
    return pairing(x.kind, x.position_part(), y.dual_part()) - pairing(x.kind, y.position_part(), x.dual_part());
}

std::complex<double> cocycle_alpha(const LatticeElement& x, const LatticeElement& y) {
    return std::polar(1.0, std::numbers::pi * cocycle_exponent(x, y));
}

}  // namespace nctheta
