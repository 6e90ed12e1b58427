#include "nctheta/heisenberg_module.hpp"

#include "nctheta/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nctheta {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
constexpr double kPhaseMask = 1e-8;
constexpr double kGridTolerance = 1e-9;

int wrap(int k, int m) {
    const int r = k % m;
    return r < 0 ? r + m : r;
}

void check_kind(EmbeddingKind a, EmbeddingKind b) {
    if (a != b) throw Error(ErrorCode::KindMismatch, "module vector and lattice element come from different embeddings");
}

/// Number of grid cells for a continuous shift; throws when the shift is off-grid.
long grid_cells(double shift, double spacing) {
    const double cells = shift / spacing;
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > kGridTolerance * std::max(1.0, std::abs(cells))) {
        throw Error(ErrorCode::GridIncompatibleShift,
                    "shift " + std::to_string(shift) + " is not a multiple of spacing " + std::to_string(spacing));
    }
    return static_cast<long>(rounded);
}

/// Coordinates r of a point paired with ĥ: (s1, s2, 0) or (s, n1, n2).
std::array<double, 3> pairing_coordinates(EmbeddingKind kind, const ModulePoint& x) {
    if (kind == EmbeddingKind::VectorSpace) return {x.s[0], x.s[1], 0.0};
    return {x.s[0], static_cast<double>(x.n[0]), static_cast<double>(x.n[1])};
}

cplx pi_phase(const LatticeElement& h, const ModulePoint& x) {
    const auto r = pairing_coordinates(h.kind, x);
    double lin = 0.0;
    double sym = 0.0;
    for (int i = 0; i < h.position_dim(); ++i) {
        lin += r[i] * h.dual[i];
        sym += h.position[i] * h.dual[i];
    }
    return std::exp(kI * (2.0 * kPi * lin + kPi * sym));
}

ModulePoint shifted(const LatticeElement& h, ModulePoint x) {
    if (h.kind == EmbeddingKind::VectorSpace) {
        x.s[0] += h.position[0];
        x.s[1] += h.position[1];
    } else {
        x.s[0] += h.position[0];
        x.n[0] += h.m1();
        x.n[1] += h.m2();
    }
    return x;
}

}  // namespace

cplx FiniteVector::at(int k1, int k2) const {
    return values[static_cast<std::size_t>(wrap(k1, m1) * m2 + wrap(k2, m2))];
}

cplx& FiniteVector::at(int k1, int k2) {
    return values[static_cast<std::size_t>(wrap(k1, m1) * m2 + wrap(k2, m2))];
}

double GaussianVector::min_imag_eigenvalue() const {
    if (continuous_dim() == 1) return quadratic(0, 0).imag();
    Eigen::Matrix2d im = quadratic.imag();
    im = 0.5 * (im + im.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(im);
    return es.eigenvalues().minCoeff();
}

cplx GaussianVector::operator()(const ModulePoint& x) const {
    cplx e = constant;
    const int p = continuous_dim();
    for (int a = 0; a < p; ++a) {
        for (int b = 0; b < p; ++b) e += kI * kPi * x.s[a] * quadratic(a, b) * x.s[b];
        e += 2.0 * kI * kPi * linear(a) * x.s[a];
    }
    if (discrete_dim() == 2) {
        const double n0 = static_cast<double>(x.n[0]);
        const double n1 = static_cast<double>(x.n[1]);
        e += -kPi * lattice_decay * (n0 * n0 + n1 * n1) + 2.0 * kPi * (lattice_linear(0) * n0 + lattice_linear(1) * n1);
    }
    return std::exp(e) * finite_factor(x.k);
}

cplx GaussianVector::continuous_factor(const std::array<double, 2>& s) const {
    cplx e{0.0, 0.0};
    const int p = continuous_dim();
    for (int a = 0; a < p; ++a) {
        for (int b = 0; b < p; ++b) e += kI * kPi * s[a] * quadratic(a, b) * s[b];
        e += 2.0 * kI * kPi * linear(a) * s[a];
    }
    return std::exp(e);
}

cplx GaussianVector::axis_factor(int axis, double s) const {
    return std::exp(kI * kPi * quadratic(axis, axis) * s * s + 2.0 * kI * kPi * linear(axis) * s);
}

cplx GaussianVector::discrete_factor(const std::array<std::int64_t, 2>& n) const {
    if (discrete_dim() == 0) return 1.0;
    const double n0 = static_cast<double>(n[0]);
    const double n1 = static_cast<double>(n[1]);
    return std::exp(-kPi * lattice_decay * (n0 * n0 + n1 * n1) +
                    2.0 * kPi * (lattice_linear(0) * n0 + lattice_linear(1) * n1));
}

cplx GaussianVector::finite_factor(const std::array<int, 2>& k) const {
    return finite ? finite->at(k[0], k[1]) : cplx{1.0, 0.0};
}

bool GaussianVector::diagonal_quadratic() const {
    return continuous_dim() == 1 || (quadratic(0, 1) == cplx{} && quadratic(1, 0) == cplx{});
}

int GridSpec::points_per_axis() const { return 2 * static_cast<int>(std::lround(extent / spacing)) + 1; }

SampledVector::SampledVector(EmbeddingKind kind, GridSpec grid, int finite_m1, int finite_m2)
    : kind_(kind), grid_(grid), fm1_(finite_m1), fm2_(finite_m2) {
    if (!(grid.spacing > 0.0) || !(grid.extent > 0.0) || grid.window < 0) {
        throw Error(ErrorCode::DegenerateTestVector, "grid needs positive extent and spacing");
    }
    ns_ = grid.points_per_axis();
    nn_ = 2 * grid.window + 1;
    std::size_t total = continuous_dim() == 2 ? static_cast<std::size_t>(ns_) * ns_ : static_cast<std::size_t>(ns_);
    if (discrete_dim() == 2) total *= static_cast<std::size_t>(nn_) * nn_;
    total *= static_cast<std::size_t>(fm1_) * fm2_;
    values_.assign(total, cplx{});
}

ModulePoint SampledVector::point(std::size_t flat) const {
    ModulePoint x;
    const std::size_t nf = static_cast<std::size_t>(fm1_) * fm2_;
    const std::size_t kf = flat % nf;
    flat /= nf;
    x.k = {static_cast<int>(kf / fm2_), static_cast<int>(kf % fm2_)};
    if (discrete_dim() == 2) {
        const std::size_t nd = flat % (static_cast<std::size_t>(nn_) * nn_);
        flat /= static_cast<std::size_t>(nn_) * nn_;
        x.n = {static_cast<std::int64_t>(nd / nn_) - grid_.window, static_cast<std::int64_t>(nd % nn_) - grid_.window};
    }
    if (continuous_dim() == 2) {
        x.s = {grid_.coordinate(static_cast<int>(flat / ns_)), grid_.coordinate(static_cast<int>(flat % ns_))};
    } else {
        x.s = {grid_.coordinate(static_cast<int>(flat)), 0.0};
    }
    return x;
}

std::optional<std::size_t> SampledVector::index_of(const ModulePoint& x) const {
    std::size_t flat = 0;
    for (int a = 0; a < continuous_dim(); ++a) {
        const long i = grid_cells(x.s[a] + grid_.extent, grid_.spacing);
        if (i < 0 || i >= ns_) return std::nullopt;
        flat = flat * ns_ + static_cast<std::size_t>(i);
    }
    if (discrete_dim() == 2) {
        for (int a = 0; a < 2; ++a) {
            if (std::abs(x.n[a]) > grid_.window) return std::nullopt;
            flat = flat * nn_ + static_cast<std::size_t>(x.n[a] + grid_.window);
        }
    }
    flat = flat * fm1_ + static_cast<std::size_t>(wrap(x.k[0], fm1_));
    flat = flat * fm2_ + static_cast<std::size_t>(wrap(x.k[1], fm2_));
    return flat;
}

cplx SampledVector::at(const ModulePoint& x) const {
    const auto idx = index_of(x);
    return idx ? values_[*idx] : cplx{};
}

bool SampledVector::contains(const ModulePoint& x) const { return index_of(x).has_value(); }

EmbeddingKind kind_of(const ModuleVector& f) {
    return std::visit([](const auto& v) -> EmbeddingKind {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, GaussianVector>) {
            return v.kind;
        } else {
            return v.kind();
        }
    }, f);
}

cplx evaluate(const ModuleVector& f, const ModulePoint& x) {
    return std::visit([&](const auto& v) -> cplx {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, GaussianVector>) {
            return v(x);
        } else {
            return v.at(x);
        }
    }, f);
}

GridSpec default_grid(const GaussianVector& f, double spacing) {
    const double lambda = f.min_imag_eigenvalue();
    if (!(lambda > 0.0)) throw Error(ErrorCode::DegenerateTestVector, "Im Q is not positive definite");
    GridSpec g;
    // Snap the extent to a whole number of cells.
    g.extent = std::ceil(6.0 / std::sqrt(lambda) / spacing) * spacing;
    g.spacing = spacing;
    g.window = 0;
    if (f.discrete_dim() == 2) {
        if (!(f.lattice_decay > 0.0)) throw Error(ErrorCode::DegenerateTestVector, "lattice decay must be positive");
        g.window = static_cast<int>(std::ceil(std::sqrt(45.0 * std::log(10.0) / (kPi * f.lattice_decay))));
    }
    return g;
}

void for_each_grid_point(EmbeddingKind kind, const GridSpec& grid, const std::function<void(const ModulePoint&)>& fn,
                         int continuous_margin, int discrete_margin, int finite_m1, int finite_m2) {
    const int ns = grid.points_per_axis();
    const int lo = continuous_margin;
    const int hi = ns - continuous_margin;
    const int w = grid.window - discrete_margin;
    ModulePoint x;
    auto finite_loop = [&]() {
        for (int k1 = 0; k1 < finite_m1; ++k1)
            for (int k2 = 0; k2 < finite_m2; ++k2) {
                x.k = {k1, k2};
                fn(x);
            }
    };
    if (kind == EmbeddingKind::VectorSpace) {
        for (int i = lo; i < hi; ++i)
            for (int j = lo; j < hi; ++j) {
                x.s = {grid.coordinate(i), grid.coordinate(j)};
                finite_loop();
            }
    } else {
        for (int i = lo; i < hi; ++i) {
            x.s = {grid.coordinate(i), 0.0};
            for (int a = -w; a <= w; ++a)
                for (int b = -w; b <= w; ++b) {
                    x.n = {a, b};
                    finite_loop();
                }
        }
    }
}

SampledVector sample(const GaussianVector& f, const GridSpec& grid) {
    const int m1 = f.finite ? f.finite->m1 : 1;
    const int m2 = f.finite ? f.finite->m2 : 1;
    SampledVector out(f.kind, grid, m1, m2);
    for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] = f(out.point(i));
    return out;
}

GaussianVector apply_pi(const LatticeElement& h, const GaussianVector& f) {
    check_kind(h.kind, f.kind);
    GaussianVector g = f;
    const int p = f.continuous_dim();
    const Eigen::Vector2d a = p == 2 ? Eigen::Vector2d(h.position[0], h.position[1]) : Eigen::Vector2d(h.position[0], 0.0);
    const Eigen::Vector2d shat = p == 2 ? Eigen::Vector2d(h.dual[0], h.dual[1]) : Eigen::Vector2d(h.dual[0], 0.0);

    double sym = 0.0;
    for (int i = 0; i < h.position_dim(); ++i) sym += h.position[i] * h.dual[i];
    cplx kappa = f.constant + kI * kPi * sym;

    const Eigen::Matrix2cd q = p == 2 ? f.quadratic : Eigen::Matrix2cd(Eigen::Matrix2cd::Zero());
    Eigen::Vector2cd qa;
    if (p == 2) {
        qa = q * a.cast<cplx>();
        kappa += kI * kPi * a.cast<cplx>().dot(qa) + 2.0 * kI * kPi * f.linear.dot(a.cast<cplx>());
    } else {
        qa = Eigen::Vector2cd(f.quadratic(0, 0) * a(0), 0.0);
        kappa += kI * kPi * f.quadratic(0, 0) * a(0) * a(0) + 2.0 * kI * kPi * f.linear(0) * a(0);
    }
    // Eigen's dot() conjugates its first argument; a is real so the above is the bilinear form.
    g.linear = f.linear + qa + shat.cast<cplx>();

    if (f.discrete_dim() == 2) {
        const Eigen::Vector2d m(static_cast<double>(h.m1()), static_cast<double>(h.m2()));
        const Eigen::Vector2d t(h.t1(), h.t2());
        kappa += -kPi * f.lattice_decay * m.squaredNorm() +
                 2.0 * kPi * (f.lattice_linear(0) * m(0) + f.lattice_linear(1) * m(1));
        g.lattice_linear = f.lattice_linear - f.lattice_decay * m.cast<cplx>() + kI * t.cast<cplx>();
    }
    g.constant = kappa;
    return g;
}

SampledVector apply_pi(const LatticeElement& h, const SampledVector& f) {
    check_kind(h.kind, f.kind());
    // Validates that the continuous shift is representable before touching values.
    grid_cells(h.position[0], f.grid().spacing);
    if (h.kind == EmbeddingKind::VectorSpace) grid_cells(h.position[1], f.grid().spacing);

    SampledVector out = f;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const ModulePoint x = f.point(i);
        out.values()[i] = pi_phase(h, x) * f.at(shifted(h, x));
    }
    return out;
}

ModuleVector apply_pi(const LatticeElement& h, const ModuleVector& f) {
    return std::visit([&](const auto& v) -> ModuleVector { return apply_pi(h, v); }, f);
}

FiniteVector apply_finite_generator(const FinitePart& part, int j, const FiniteVector& v) {
    FiniteVector out = v;
    for (int k1 = 0; k1 < v.m1; ++k1)
        for (int k2 = 0; k2 < v.m2; ++k2) {
            cplx value;
            switch (j) {
                case 1: value = v.at(k1 - 1, k2); break;
                case 2: value = std::exp(2.0 * kI * kPi * static_cast<double>(part.n1 * k1) / double(part.m1)) * v.at(k1, k2); break;
                case 3: value = v.at(k1, k2 - 1); break;
                case 4: value = std::exp(2.0 * kI * kPi * static_cast<double>(part.n2 * k2) / double(part.m2)) * v.at(k1, k2); break;
                default: throw Error(ErrorCode::KindMismatch, "generator index must be in 1..4");
            }
            out.at(k1, k2) = value;
        }
    return out;
}

ModuleVector apply_generator(const EmbeddingMap& phi, int j, const ModuleVector& f) {
    if (j < 1 || j > 4) throw Error(ErrorCode::KindMismatch, "generator index must be in 1..4");
    const LatticeElement h = lattice_element(phi, unit_index(j));
    ModuleVector g = apply_pi(h, f);
    const auto& part = phi.params().finite_part;
    if (!part) return g;

    if (auto* gv = std::get_if<GaussianVector>(&g)) {
        if (gv->finite) gv->finite = apply_finite_generator(*part, j, *gv->finite);
        return g;
    }
    auto& sv = std::get<SampledVector>(g);
    if (!sv.has_finite_part()) return g;
    if (sv.finite_m1() != part->m1 || sv.finite_m2() != part->m2) {
        throw Error(ErrorCode::KindMismatch, "sampled finite dimensions differ from the embedding's finite part");
    }
    SampledVector out = sv;
    for (std::size_t i = 0; i < out.size(); ++i) {
        ModulePoint x = sv.point(i);
        cplx value;
        switch (j) {
            case 1: x.k[0] -= 1; value = sv.at(x); break;
            case 2: value = std::exp(2.0 * kI * kPi * static_cast<double>(part->n1 * x.k[0]) / double(part->m1)) * sv.at(x); break;
            case 3: x.k[1] -= 1; value = sv.at(x); break;
            default: value = std::exp(2.0 * kI * kPi * static_cast<double>(part->n2 * x.k[1]) / double(part->m2)) * sv.at(x); break;
        }
        out.values()[i] = value;
    }
    return out;
}

namespace {

cplx mean_phase_ratio(const std::vector<cplx>& num, const std::vector<cplx>& den) {
    cplx sum{};
    std::size_t count = 0;
    for (std::size_t i = 0; i < num.size(); ++i) {
        if (std::abs(den[i]) > kPhaseMask) {
            sum += num[i] / den[i];
            ++count;
        }
    }
    if (count == 0) throw Error(ErrorCode::DegenerateTestVector, "no grid point above the phase mask threshold");
    return sum / static_cast<double>(count);
}

}  // namespace

cplx measure_commutation_phase(const EmbeddingMap& phi, int i, int j, const SampledVector& f) {
    const ModuleVector fv = f;
    const auto ij = std::get<SampledVector>(apply_generator(phi, i, apply_generator(phi, j, fv)));
    const auto ji = std::get<SampledVector>(apply_generator(phi, j, apply_generator(phi, i, fv)));
    return mean_phase_ratio(ij.values(), ji.values());
}

cplx measure_commutation_phase(const EmbeddingMap& phi, int i, int j, const GaussianVector& f, const GridSpec& grid) {
    const ModuleVector fv = f;
    const auto ij = std::get<GaussianVector>(apply_generator(phi, i, apply_generator(phi, j, fv)));
    const auto ji = std::get<GaussianVector>(apply_generator(phi, j, apply_generator(phi, i, fv)));
    std::vector<cplx> num;
    std::vector<cplx> den;
    const int m1 = f.finite ? f.finite->m1 : 1;
    const int m2 = f.finite ? f.finite->m2 : 1;
    for_each_grid_point(f.kind, grid, [&](const ModulePoint& x) {
        num.push_back(ij(x));
        den.push_back(ji(x));
    }, 0, 0, m1, m2);
    return mean_phase_ratio(num, den);
}

std::array<double, 3> ConnectionSet::multiplier(int i) const {
    const int r = i - 1;
    if (kind == EmbeddingKind::VectorSpace) return {coefficients(r, 0), coefficients(r, 1), 0.0};
    return {coefficients(r, 0), coefficients(r, 1), coefficients(r, 2)};
}

std::array<double, 2> ConnectionSet::derivative(int i) const {
    const int r = i - 1;
    if (kind == EmbeddingKind::VectorSpace) return {coefficients(r, 2), coefficients(r, 3)};
    return {coefficients(r, 3), 0.0};
}

ConnectionSet build_connections(const EmbeddingMap& phi) {
    ConnectionSet c;
    c.kind = phi.kind();
    if (phi.kind() == EmbeddingKind::VectorSpace) {
        const Eigen::Matrix4d x = phi.entries();
        c.coefficients = x.inverse();
        return c;
    }
    c.b = phi.inverse_m();
    const double theta1 = phi.params().theta1;
    c.coefficients << 1.0 / theta1, 0, 0, 0,
                      0, 0, 0, 1,
                      0, c.b(0, 0), c.b(0, 1), 0,
                      0, c.b(1, 0), c.b(1, 1), 0;
    const Eigen::Matrix4d top = phi.entries().topRows(4);
    if (!(c.coefficients * top).isIdentity(1e-12)) {
        throw Error(ErrorCode::InternalIdentityViolated, "connection coefficients do not invert the embedding");
    }
    return c;
}

Field as_field(const ModuleVector& f) {
    return [f](const ModulePoint& x) { return evaluate(f, x); };
}

Field generator_field(const EmbeddingMap& phi, int j, Field f) {
    const LatticeElement h = lattice_element(phi, unit_index(j));
    const auto part = phi.params().finite_part;
    return [h, part, j, f = std::move(f)](const ModulePoint& x) -> cplx {
        ModulePoint y = shifted(h, x);
        cplx phase = pi_phase(h, x);
        if (part) {
            switch (j) {
                case 1: y.k[0] -= 1; break;
                case 2: phase *= std::exp(2.0 * kI * kPi * static_cast<double>(part->n1 * x.k[0]) / double(part->m1)); break;
                case 3: y.k[1] -= 1; break;
                default: phase *= std::exp(2.0 * kI * kPi * static_cast<double>(part->n2 * x.k[1]) / double(part->m2)); break;
            }
        }
        return phase * f(y);
    };
}

cplx central_difference(const Field& f, const ModulePoint& x, int axis, double h) {
    auto at = [&](double offset) {
        ModulePoint y = x;
        y.s[axis] += offset;
        return f(y);
    };
    return (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
}

Field connection_field(const ConnectionSet& conn, int i, Field f, double h) {
    const auto mult = conn.multiplier(i);
    const auto deriv = conn.derivative(i);
    const EmbeddingKind kind = conn.kind;
    return [=, f = std::move(f)](const ModulePoint& x) -> cplx {
        const auto r = pairing_coordinates(kind, x);
        cplx value = -2.0 * kI * kPi * (mult[0] * r[0] + mult[1] * r[1] + mult[2] * r[2]) * f(x);
        for (int axis = 0; axis < 2; ++axis) {
            if (deriv[axis] != 0.0) value += deriv[axis] * central_difference(f, x, axis, h);
        }
        return value;
    };
}

namespace {

double commutator_residual(const EmbeddingMap& phi, int i, int j, const Field& f, EmbeddingKind kind,
                           const GridSpec& grid, double h, int cont_margin, int disc_margin, int fm1, int fm2) {
    if (i < 1 || i > 4 || j < 1 || j > 4) throw Error(ErrorCode::KindMismatch, "indices must be in 1..4");
    const ConnectionSet conn = build_connections(phi);
    const Field uf = generator_field(phi, j, f);
    const Field nabla_uf = connection_field(conn, i, uf, h);
    const Field u_nabla_f = generator_field(phi, j, connection_field(conn, i, f, h));
    const cplx delta = i == j ? cplx{0.0, 2.0 * kPi} : cplx{};

    double worst = 0.0;
    double scale = 0.0;
    for_each_grid_point(kind, grid, [&](const ModulePoint& x) {
        const cplx u = uf(x);
        scale = std::max(scale, std::abs(u));
        worst = std::max(worst, std::abs(nabla_uf(x) - u_nabla_f(x) - delta * u));
    }, cont_margin, disc_margin, fm1, fm2);
    if (!(scale > 0.0)) throw Error(ErrorCode::DegenerateTestVector, "U_j f vanishes on the grid");
    return worst / scale;
}

}  // namespace

double connection_commutator_residual(const EmbeddingMap& phi, int i, int j, const GaussianVector& f,
                                      const ResidualGrid& grid) {
    check_kind(phi.kind(), f.kind);
    const int m1 = f.finite ? f.finite->m1 : 1;
    const int m2 = f.finite ? f.finite->m2 : 1;
    return commutator_residual(phi, i, j, [f](const ModulePoint& x) { return f(x); }, f.kind, grid.grid,
                               grid.fd_step, 0, 0, m1, m2);
}

double connection_commutator_residual(const EmbeddingMap& phi, int i, int j, const SampledVector& f) {
    check_kind(phi.kind(), f.kind());
    const LatticeElement h = lattice_element(phi, unit_index(j));
    long cells = std::labs(grid_cells(h.position[0], f.grid().spacing));
    int disc = 0;
    if (h.kind == EmbeddingKind::VectorSpace) {
        cells = std::max(cells, std::labs(grid_cells(h.position[1], f.grid().spacing)));
    } else {
        disc = static_cast<int>(std::max(std::llabs(h.m1()), std::llabs(h.m2())));
    }
    const int margin = static_cast<int>(cells) + 2;
    return commutator_residual(phi, i, j, [f](const ModulePoint& x) { return f.at(x); }, f.kind(), f.grid(),
                               f.grid().spacing, margin, disc, f.finite_m1(), f.finite_m2());
}

}  // namespace nctheta
