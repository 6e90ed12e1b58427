#include "nctheta/complex_structure.hpp"
#include "nctheta/heisenberg_module.hpp"
#include "nctheta/quantum_theta.hpp"
#include "nctheta/special_functions.hpp"

#include <benchmark/benchmark.h>

using namespace nctheta;

namespace {

EmbeddingMap lattice() {
    EmbeddingParams p;
    p.kind = EmbeddingKind::Lattice;
    p.theta1 = 0.5;
    p.delta_hat << 0.0, 0.7, 0.3, 0.0;
    return build_embedding(p);
}

ComplexStructure lattice_structure(const EmbeddingMap& phi) {
    Eigen::Matrix2cd tau = Eigen::Matrix2cd::Zero();
    tau(0, 0) = {0.0, 1.0};
    return make_complex_structure(phi, tau);
}

void BM_JacobiTheta(benchmark::State& state) {
    const cplx tau(0.3, 0.2 * static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(jacobi_theta({tau, cplx(0.1, 0.05)}));
}
BENCHMARK(BM_JacobiTheta)->Arg(1)->Arg(5)->Arg(25);

void BM_QuantumThetaSeries(benchmark::State& state) {
    const EmbeddingMap phi = lattice();
    const ComplexStructure cs = lattice_structure(phi);
    for (auto _ : state) benchmark::DoNotOptimize(quantum_theta_series(phi, cs, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_QuantumThetaSeries)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_InnerProductOracle(benchmark::State& state) {
    const EmbeddingMap phi = lattice();
    const GaussianVector f = theta_vector(lattice_structure(phi));
    const LatticeElement h = lattice_element(phi, {1, 1, 1, 0});
    for (auto _ : state) benchmark::DoNotOptimize(inner_product_oracle(f, h));
}
BENCHMARK(BM_InnerProductOracle)->Unit(benchmark::kMicrosecond);

void BM_InnerProductClosed(benchmark::State& state) {
    const EmbeddingMap phi = lattice();
    const ComplexStructure cs = lattice_structure(phi);
    const GaussianVector f = theta_vector(cs);
    const LatticeElement h = lattice_element(phi, {1, 1, 1, 0});
    for (auto _ : state) benchmark::DoNotOptimize(inner_product_closed(cs, f, h));
}
BENCHMARK(BM_InnerProductClosed);

void BM_CommutationPhaseSampled(benchmark::State& state) {
    const EmbeddingMap phi = lattice();
    const GaussianVector f = theta_vector(lattice_structure(phi));
    const SampledVector s = sample(f, default_grid(f, 0.05));
    for (auto _ : state) benchmark::DoNotOptimize(measure_commutation_phase(phi, 3, 4, s));
}
BENCHMARK(BM_CommutationPhaseSampled)->Unit(benchmark::kMicrosecond);

void BM_ConnectionResidual(benchmark::State& state) {
    const EmbeddingMap phi = lattice();
    const GaussianVector f = theta_vector(lattice_structure(phi));
    const ResidualGrid rg{default_grid(f, 0.25), 1e-3};
    for (auto _ : state) benchmark::DoNotOptimize(connection_commutator_residual(phi, 2, 2, f, rg));
}
BENCHMARK(BM_ConnectionResidual)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
