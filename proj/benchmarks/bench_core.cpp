#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "capssc/biot_savart.hpp"
#include "capssc/disk_poisson.hpp"
#include "capssc/evolve.hpp"
#include "capssc/geometry.hpp"
#include "capssc/grid.hpp"
#include "capssc/rng.hpp"

using namespace capssc;

namespace {

double smooth01(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double odd_bump(vec2 y) {
    const double sgn = (y.x < 0 ? -1.0 : 1.0) * (y.y < 0 ? -1.0 : 1.0);
    const double a = std::abs(y.x), b = std::abs(y.y);
    auto ramp = [](double c) { return smooth01(c / 0.15) * smooth01((1.6 - c) / 0.3); };
    return sgn * ramp(a) * ramp(b);
}

quarter_grid bump_grid(int n) {
    quarter_grid g(n, 2.0, axis_parity::odd, axis_parity::odd);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g.at(i, j) = odd_bump({i * g.spacing, j * g.spacing});
    g.enforce_axis_parity();
    return g;
}

void bm_poisson_solve(benchmark::State& state) {
    const disk_spec disk{2.0, static_cast<int>(state.range(0)), static_cast<int>(state.range(1))};
    const quarter_grid g = bump_grid(257);
    for (auto _ : state) {
        const stream_solution sol = poisson_solve(g, disk);
        benchmark::DoNotOptimize(sol.psi.front().front());
    }
    state.SetLabel(std::to_string(disk.n_radial) + "x" + std::to_string(disk.n_angular));
}

void bm_advection_step(benchmark::State& state) {
    sim_state s;
    s.omega = bump_grid(static_cast<int>(state.range(0)));
    s.solver = disk_spec{2.0, static_cast<int>(state.range(1)), static_cast<int>(state.range(2))};
    s.cfl_limit = 0.9;
    s.refresh_velocity();
    const double dt = 0.2 * s.omega.spacing / std::max(s.max_speed, 1e-12);
    for (auto _ : state) {
        step(s, dt);
        benchmark::DoNotOptimize(s.omega.values.data());
    }
}

void bm_corner_integral(benchmark::State& state) {
    const quarter_grid g = bump_grid(513);
    const scalar_field omega = [&g](vec2 p) { return g.sample(p.x, p.y); };
    const vec2 x{0.12, 0.2};
    for (auto _ : state) {
        benchmark::DoNotOptimize(main_integral(omega, x));
    }
}

void bm_enclosing_circle(benchmark::State& state) {
    std::mt19937_64 rng = seeded_engine(7);
    const planar_curve poly = random_convex_polygon(rng, 48, 64);
    for (auto _ : state) {
        const circle c = circumcircle(poly);
        benchmark::DoNotOptimize(c.radius);
    }
}

BENCHMARK(bm_poisson_solve)->Args({96, 256})->Args({192, 512})->Args({384, 1024})->Unit(benchmark::kMillisecond);
BENCHMARK(bm_advection_step)->Args({129, 96, 256})->Args({257, 192, 512})->Unit(benchmark::kMillisecond);
BENCHMARK(bm_corner_integral)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_enclosing_circle)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
