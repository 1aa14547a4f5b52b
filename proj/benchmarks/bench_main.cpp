#include <benchmark/benchmark.h>

#include <cosshell/energy.hpp>
#include <cosshell/integrate.hpp>
#include <cosshell/kinematics.hpp>
#include <cosshell/minimize.hpp>
#include <cosshell/surface.hpp>

namespace {

using namespace cosshell;

MaterialParams bench_material() {
    MaterialParams p;
    p.mu = 80.0;
    p.lambda = 120.0;
    p.mu_c = 40.0;
    p.L_c = 0.1;
    p.b1 = 1.0;
    p.b2 = 0.7;
    p.b3 = 0.3;
    p.h = 0.01;
    return p;
}

Surface bench_surface() { return Surface::cylinder(0.8, {0.0, 1.2, 0.0, 0.7}); }

void frame_evaluation(benchmark::State& state) {
    const Surface surface = bench_surface();
    for (auto _ : state) {
        benchmark::DoNotOptimize(frame_at(surface, 0.37, 0.41));
    }
}
BENCHMARK(frame_evaluation);

void strain_evaluation(benchmark::State& state) {
    const Surface surface = bench_surface();
    const MaterialParams params = bench_material();
    const GeometryFrame frame = frame_at(surface, 0.37, 0.41);
    const ShellPointState point = synthetic_field(7, 0.05)(frame);
    for (auto _ : state) {
        benchmark::DoNotOptimize(strain_measures(frame, point, params));
    }
}
BENCHMARK(strain_evaluation);

void density_evaluation(benchmark::State& state) {
    const Surface surface = bench_surface();
    const MaterialParams params = bench_material();
    const GeometryFrame frame = frame_at(surface, 0.37, 0.41);
    const StrainMeasures sm = strain_measures(frame, synthetic_field(7, 0.05)(frame), params);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reduced_density(frame, sm, params));
    }
}
BENCHMARK(density_evaluation);

void reduced_integral(benchmark::State& state) {
    const Surface surface = bench_surface();
    const MaterialParams params = bench_material();
    const StateField field = synthetic_field(7, 0.05);
    QuadratureSpec spec;
    spec.n1 = 4;
    spec.n2 = 4;
    spec.n_gauss_cell = 2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_reduced(surface, field, params, spec));
    }
}
BENCHMARK(reduced_integral);

void volume_integral(benchmark::State& state) {
    const Surface surface = bench_surface();
    const MaterialParams params = bench_material();
    const StateField field = synthetic_field(7, 0.05);
    QuadratureSpec spec;
    spec.n1 = 4;
    spec.n2 = 4;
    spec.n_gauss_cell = 2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_volume(surface, field, params, spec));
    }
}
BENCHMARK(volume_integral);

void solver_gradient(benchmark::State& state) {
    ShellGrid grid;
    grid.n1 = 6;
    grid.n2 = 6;
    grid.domain = bench_surface().domain();
    BoundaryConditions bcs;
    bcs.clamps.push_back({});
    bcs.loads.f_bar = Vec3(0.0, 0.0, 0.4);
    const Problem problem = assemble(grid, bcs, bench_surface(), bench_material());
    const std::vector<double> dofs = problem.reference_dofs();
    for (auto _ : state) {
        benchmark::DoNotOptimize(problem.gradient(dofs));
    }
}
BENCHMARK(solver_gradient);

}  // namespace

BENCHMARK_MAIN();
