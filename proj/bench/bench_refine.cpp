#include <benchmark/benchmark.h>

#include "futs/bisim.hpp"
#include "futs/syntax.hpp"

using namespace futs;

namespace {

// A ring of n cells passing a token; symmetric cells collapse under refinement.
FutsModel ring(int n) {
    std::string text;
    for (int i = 0; i < n; ++i) {
        int next = (i + 1) % n;
        text += "C" + std::to_string(i) + " = (a, 1).C" + std::to_string(next) + " + (b, 2).D" + std::to_string(i) + "\n";
        text += "D" + std::to_string(i) + " = (c, " + std::to_string(1 + i % 3) + ").C" + std::to_string(next) + "\n";
    }
    text += "init C0 <> C" + std::to_string(n / 2) + "\n";
    return explore(parse_model(Lang::PEPA, text), 1000000);
}

void BM_refine(benchmark::State& st) {
    auto f = ring(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(refine(f));
    st.counters["states"] = static_cast<double>(f.size());
}

void BM_refine_serial(benchmark::State& st) {
    auto f = ring(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(refine_serial(f));
    st.counters["states"] = static_cast<double>(f.size());
}

}  // namespace

BENCHMARK(BM_refine)->Arg(12)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_refine_serial)->Arg(12)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
