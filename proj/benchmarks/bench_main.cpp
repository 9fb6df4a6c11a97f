#include <benchmark/benchmark.h>

#include <random>

#include "fcrystal/newton.hpp"
#include "fcrystal/padic.hpp"

using namespace fcrystal;

static void StrataScan(benchmark::State& state) {
    int r = int(state.range(0));
    auto datum = make_group_datum(Family::B, r, 1, 1);
    auto mu = MinusculeSpec::from_l(datum, 1);
    for (auto _ : state) {
        auto res = strata(datum, mu);
        benchmark::DoNotOptimize(res.strata.size());
    }
    state.SetItemsProcessed(state.iterations() *
                            (long long)WeylEnumeration(datum, true).size());
}
BENCHMARK(StrataScan)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void SlopePolygon(benchmark::State& state) {
    std::mt19937_64 gen(7);
    int m = int(state.range(0));
    MonomialOperator op;
    op.size = m;
    op.perm.resize(m);
    op.exp.resize(m);
    for (int i = 0; i < m; ++i) op.perm[i] = i;
    for (int i = m - 1; i > 0; --i) std::swap(op.perm[i], op.perm[gen() % (i + 1)]);
    for (auto& e : op.exp) e = (long long)(gen() % 7) - 3;
    for (auto _ : state) benchmark::DoNotOptimize(slope_polygon(op));
}
BENCHMARK(SlopePolygon)->Arg(16)->Arg(64)->Arg(256);

static void SplitIteration(benchmark::State& state) {
    SplitProblem pb;
    pb.p = 5;
    pb.precision = int(state.range(0));
    pb.block_sizes = {2, 2};
    pb.block_slopes = {0, 1};
    pb.phi = PadicMatrix::zero_matrix(5, pb.precision, 4);
    for (int i = 0; i < 4; ++i)
        pb.phi.at(i, i) =
            PadicApprox::from_integer(5, 1, pb.precision).shifted(i < 2 ? 0 : 1);
    pb.u = PadicMatrix::identity(5, pb.precision, 4);
    pb.u.at(2, 0) = PadicApprox::from_integer(5, 3, pb.precision);
    pb.u.at(3, 1) = PadicApprox::from_integer(5, 7, pb.precision);
    for (auto _ : state) {
        auto h = split_slopes(pb, pb.precision);
        benchmark::DoNotOptimize(h);
    }
}
BENCHMARK(SplitIteration)->Arg(10)->Arg(20)->Arg(26);

BENCHMARK_MAIN();
