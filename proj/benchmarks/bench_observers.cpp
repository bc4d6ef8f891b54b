#include <benchmark/benchmark.h>

#include "hyptctl/observers.hpp"
#include "hyptctl/formula_parser.hpp"

using namespace hyptctl;

static void BM_ObserverCountMod(benchmark::State& state) {
    CountModAtom atom;
    atom.terms = {{1, "a", "pi"}, {-1, "b", "pi"}};
    atom.modulus = state.range(0);
    atom.rel = Rel::Eq;
    atom.bound = 0;
    for (auto _ : state) benchmark::DoNotOptimize(observer_count_mod(atom, "__ext0"));
}
BENCHMARK(BM_ObserverCountMod)->Arg(2)->Arg(4)->Arg(8);

static void BM_ObserverProduct(benchmark::State& state) {
    TopPtr f = parse_formula(
        "E [pi] (((COUNT(a@pi) - COUNT(b@pi)) mod 4 in {0,1,3}) U "
        "(LAST(a@pi) - LAST(b@pi) not in [-p, p]))");
    for (auto _ : state) benchmark::DoNotOptimize(build_observer_product(f));
}
BENCHMARK(BM_ObserverProduct)->Unit(benchmark::kMillisecond);
