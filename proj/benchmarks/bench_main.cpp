#include "ergolab/interval_set.hpp"
#include "ergolab/rank_one.hpp"
#include "ergolab/spectral.hpp"
#include "ergolab/system.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace ergolab;

void bm_shifted_meet(benchmark::State& state) {
    RankOne eng(RankOneSpec::preset("katok"));
    const int stage = static_cast<int>(state.range(0));
    const LevelSet a = LevelSet::from_runs(stage, {{BigInt(0), eng.height(stage) / 2}});
    const LevelSet b = LevelSet::from_runs(stage, {{eng.height(stage) / 4, eng.height(stage)}});
    const BigInt n = eng.height(stage + 1) / 3;
    for (auto _ : state) {
        RankOne fresh(RankOneSpec::preset("katok"));
        auto r = fresh.shifted_meet(a, b, n, std::nullopt, stage + 6);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(bm_shifted_meet)->Arg(3)->Arg(5)->Arg(7);

void bm_interval_algebra(benchmark::State& state) {
    const int pieces = static_cast<int>(state.range(0));
    std::vector<std::pair<Rational, Rational>> pa, pb;
    for (int i = 0; i < pieces; ++i) {
        pa.emplace_back(Rational(2 * i, 2 * pieces + 1), Rational(2 * i + 1, 2 * pieces + 1));
        pb.emplace_back(Rational(3 * i + 1, 3 * pieces + 2), Rational(3 * i + 2, 3 * pieces + 2));
    }
    const IntervalSet a = IntervalSet::from_pieces(pa);
    const IntervalSet b = IntervalSet::from_pieces(pb);
    const Rational shift(355, 113 * 7);
    for (auto _ : state) {
        const IntervalSet u = a.unite(b);
        const IntervalSet m = u.minus(a.intersect(b));
        benchmark::DoNotOptimize(m.translate_mod1(shift).measure());
    }
}
BENCHMARK(bm_interval_algebra)->Arg(16)->Arg(128)->Arg(1024);

void bm_fejer_grid(benchmark::State& state) {
    const System sys(RotationSpec{fibonacci_convergent(15)});
    StepFunction f;
    f.terms.emplace_back(Rational(1), IntervalSet::interval(Rational(0), Rational(1, 2)));
    const Autocovariance ac = autocovariance(sys, f, 128);
    const int grid = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto rho = fejer_density(ac, grid, 1);
        benchmark::DoNotOptimize(rho);
    }
}
BENCHMARK(bm_fejer_grid)->Arg(1024)->Arg(8192);

} // namespace

BENCHMARK_MAIN();
