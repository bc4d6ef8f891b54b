#include <benchmark/benchmark.h>

#include "hyptctl/backend.hpp"
#include "hyptctl/model_parser.hpp"
#include "hyptctl/reduce.hpp"
#include "hyptctl/formula_parser.hpp"

using namespace hyptctl;

static void BM_SynthOpacity(benchmark::State& state) {
    // terminating end-to-end pipeline: self-composition, two counting
    // observers, bounded until synthesis
    Pta m = load_pta_file(std::string(HYPTCTL_FIXTURE_DIR) + "/opaque4.pta");
    TopPtr f = load_formula_file(std::string(HYPTCTL_FIXTURE_DIR) + "/opacity.hq");
    SynthOptions opts;
    opts.timeout_seconds = 60;
    for (auto _ : state) {
        auto r = reduce_synth(m, f, opts);
        benchmark::DoNotOptimize(r.result.is_empty());
    }
}
BENCHMARK(BM_SynthOpacity)->Unit(benchmark::kMillisecond);

static void BM_SelfCompose(benchmark::State& state) {
    Pta m = load_pta_file(std::string(HYPTCTL_FIXTURE_DIR) + "/coffee.pta");
    for (auto _ : state) benchmark::DoNotOptimize(self_compose(m, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SelfCompose)->Arg(2)->Arg(3);
