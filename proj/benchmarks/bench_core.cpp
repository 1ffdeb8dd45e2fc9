#include <benchmark/benchmark.h>

#include "eigenscope/flow.hpp"
#include "eigenscope/integrals.hpp"
#include "eigenscope/spectrum.hpp"
#include "eigenscope/stationary_phase.hpp"

using namespace eigenscope;

static void BM_HarmonicRow(benchmark::State& state) {
    int j = static_cast<int>(state.range(0));
    Point p{Eigen::Vector3d(0.6, 0.48, 0.64)};
    for (auto _ : state) {
        Eigen::VectorXd row = real_harmonics_row(j, p);
        benchmark::DoNotOptimize(row);
    }
}
BENCHMARK(BM_HarmonicRow)->Arg(20)->Arg(50)->Arg(100);

static void BM_HarmonicEval(benchmark::State& state) {
    Manifold s2 = Manifold::sphere(2);
    Eigenfunction e(s2, {SpectralIndex::Kind::SphereReal, static_cast<int>(state.range(0)), 7, {}});
    Point p{Eigen::Vector3d(0.6, 0.48, 0.64)};
    for (auto _ : state) benchmark::DoNotOptimize(e(p));
}
BENCHMARK(BM_HarmonicEval)->Arg(20)->Arg(100);

static void BM_IntegrateEigenfunction(benchmark::State& state) {
    Manifold s2 = Manifold::sphere(2);
    Submanifold eq = Submanifold::sphere_equator(s2, 40.0);
    Eigenfunction e(s2, {SpectralIndex::Kind::SphereReal, 30, 4, {}});
    for (auto _ : state) benchmark::DoNotOptimize(integrate_eigenfunction(e, eq));
}
BENCHMARK(BM_IntegrateEigenfunction);

static void BM_FlowClosedForm(benchmark::State& state) {
    Manifold s2 = Manifold::sphere(2);
    PhasePoint p{{Eigen::Vector3d(1, 0, 0)}, {Eigen::Vector3d(0, 0, 1)}};
    double t = 0.0;
    for (auto _ : state) {
        t += 0.1;
        benchmark::DoNotOptimize(flow(s2, p, t));
    }
}
BENCHMARK(BM_FlowClosedForm);

static void BM_FlowOde(benchmark::State& state) {
    Manifold s2 = Manifold::sphere(2);
    PhasePoint p{{Eigen::Vector3d(1, 0, 0)}, {Eigen::Vector3d(0, 0, 1)}};
    FlowSettings ode;
    ode.mode = FlowMode::Ode;
    for (auto _ : state) benchmark::DoNotOptimize(flow(s2, p, 1.0, ode));
}
BENCHMARK(BM_FlowOde);

static void BM_ConormalGap(benchmark::State& state) {
    Manifold t2 = Manifold::torus(2);
    Submanifold arc = Submanifold::torus_sine_arc(t2);
    PhasePoint p{{Eigen::Vector2d(0.4, 0.6)}, {Eigen::Vector2d(0, 1)}};
    for (auto _ : state) benchmark::DoNotOptimize(conormal_gap(t2, p, arc));
}
BENCHMARK(BM_ConormalGap);

static void BM_OscillatoryQuadrature(benchmark::State& state) {
    OscillatoryProblem prob = test_phase_problem("cubic");
    Eigen::VectorXd none(0);
    double lambda = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(oscillatory_quadrature(prob, lambda, none));
}
BENCHMARK(BM_OscillatoryQuadrature)->Arg(100)->Arg(400);

BENCHMARK_MAIN();
