// Serial reference against the OpenMP kernels on the three parallel entry points.

#include <benchmark/benchmark.h>

#include <vector>

#include "fraclab/ball_poisson.hpp"
#include "fraclab/geometry.hpp"
#include "fraclab/moduli.hpp"

using namespace fraclab;

namespace {

Execution mode_of(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void BM_SolveMany(benchmark::State& state) {
    const BallProblem p = BallProblem::make(datum_thm15(ModulusFunction::power(0.5), 2), 0.5);
    std::vector<Point> xs;
    for (int i = 0; i < 16; ++i) xs.push_back({0.06 * i, 0.02 * i, 0.0});
    const QuadratureSpec q;
    for (auto _ : state) benchmark::DoNotOptimize(solve_many(p, xs, q, mode_of(state)));
}

void BM_SeminormExt(benchmark::State& state) {
    const ExteriorDatum g = datum_ex43(0.5, 3);
    for (auto _ : state) benchmark::DoNotOptimize(seminorm_ext(g, *g.modulus, 20000, 7, mode_of(state)));
}

void BM_ExteriorDini(benchmark::State& state) {
    const Paraboloid P{ModulusFunction::power(0.25), 0.5};
    const DomainOracle ball = DomainOracle::ball(3, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(check_exterior_dini(ball, ball.frames()[0].z, P, 200000, 3, mode_of(state)));
}

}  // namespace

BENCHMARK(BM_SolveMany)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SeminormExt)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ExteriorDini)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
