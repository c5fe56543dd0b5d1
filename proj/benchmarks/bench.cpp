#include <benchmark/benchmark.h>

#include "qtsim/potential.hpp"
#include "qtsim/propagator.hpp"
#include "qtsim/wigner.hpp"

using namespace qtsim;

namespace {
const double kMass = 0.2 * units::electron_rest_mass;
}

static void BM_PropagatorStep(benchmark::State& state) {
    const int n = int(state.range(0));
    SpatialGrid g = make_grid(0.0, 600.0, n);
    Potential v = double_barrier(g, 350.0, 0.8, 0.2, 4.0);
    Propagator p(g, v, 3.0, kMass);
    PureState psi = gaussian_packet(g, 280.0, 0.69, 15.0);
    for (auto _ : state) {
        psi = p.step(psi);
        benchmark::DoNotOptimize(psi.amplitudes.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_PropagatorStep)->Arg(3000)->Arg(12000);

static void BM_WignerTransform(benchmark::State& state) {
    const int n = int(state.range(0));
    SpatialGrid g = make_grid(0.0, double(n - 1), n);
    MomentumGrid kg = conjugate_momentum_grid(g);
    PureState psi = gaussian_packet(g, n / 2.0, 0.5, n / 16.0);
    for (auto _ : state) {
        WignerField f = wigner_from_state(psi, kg, WignerRows::nodes_only);
        benchmark::DoNotOptimize(f.values.data());
    }
}
BENCHMARK(BM_WignerTransform)->Arg(256)->Arg(512);

static void BM_WignerInverse(benchmark::State& state) {
    const int n = int(state.range(0));
    SpatialGrid g = make_grid(0.0, double(n - 1), n);
    MomentumGrid kg = conjugate_momentum_grid(g);
    PureState psi = gaussian_packet(g, n / 2.0, 0.5, n / 16.0);
    WignerField f = wigner_from_state(psi, kg);
    for (auto _ : state) {
        DensityMatrixGrid rho = density_matrix_from_wigner(f);
        benchmark::DoNotOptimize(rho.values.data());
    }
}
BENCHMARK(BM_WignerInverse)->Arg(256);

BENCHMARK_MAIN();
