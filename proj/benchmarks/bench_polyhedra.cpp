#include <benchmark/benchmark.h>

#include "hyptctl/polyhedra.hpp"

using namespace hyptctl;

namespace {

ConvexPoly zone_like(int vars) {
    ConvexPoly p;
    for (int i = 0; i < vars; ++i) {
        std::string x = "c" + std::to_string(i);
        p.add(LinIneq::make({{x, 1}}, Rational(-(i + 3)), Rel::Le));
        p.add(LinIneq::make({{x, 1}}, 0, Rel::Ge));
        for (int j = 0; j < i; ++j) {
            std::string y = "c" + std::to_string(j);
            p.add(LinIneq::make({{x, 1}, {y, -1}}, Rational(-(i - j)), Rel::Le));
        }
    }
    return p;
}

}  // namespace

static void BM_Emptiness(benchmark::State& state) {
    ConvexPoly p = zone_like(static_cast<int>(state.range(0)));
    p.add(LinIneq::make({{"c0", 1}}, Rational(-1), Rel::Ge));
    for (auto _ : state) {
        ConvexPoly q = p;
        q.add(LinIneq::make({{"c1", 1}}, Rational(-2), Rel::Le));
        benchmark::DoNotOptimize(q.is_empty());
    }
}
BENCHMARK(BM_Emptiness)->Arg(3)->Arg(5)->Arg(7);

static void BM_Eliminate(benchmark::State& state) {
    ConvexPoly p = zone_like(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(p.eliminate("c1"));
    }
}
BENCHMARK(BM_Eliminate)->Arg(3)->Arg(5)->Arg(7);

static void BM_Complement(benchmark::State& state) {
    std::vector<ConvexPoly> polys;
    for (int i = 0; i < state.range(0); ++i) {
        ConvexPoly p;
        p.add(LinIneq::make({{"p1", 1}, {"p2", Rational(-i - 1)}}, Rational(-i), Rel::Lt));
        p.add(LinIneq::make({{"p2", 1}}, Rational(-3 - i), Rel::Le));
        polys.push_back(std::move(p));
    }
    ParamSet s = ParamSet::of_polys({"p1", "p2"}, polys);
    for (auto _ : state) benchmark::DoNotOptimize(s.complement());
}
BENCHMARK(BM_Complement)->Arg(1)->Arg(3)->Arg(5);

BENCHMARK_MAIN();
