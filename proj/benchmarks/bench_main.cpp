#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "lgre/gre_graph.hpp"
#include "lgre/gre_sim.hpp"
#include "lgre/model.hpp"
#include "lgre/simulation.hpp"

using namespace lgre;

namespace {

// Ring of n elements with alternating labels and a chord every third step.
RelationalModel ring(std::size_t n) {
    ModelBuilder b;
    for (std::size_t i = 0; i < n; ++i) b.element("v" + std::to_string(i));
    b.declare_unary("p");
    b.declare_binary("r");
    for (std::size_t i = 0; i < n; ++i) {
        const std::string v = "v" + std::to_string(i);
        if (i % 2 == 0) b.unary("p", v);
        b.binary("r", v, "v" + std::to_string((i + 1) % n));
        if (i % 3 == 0) b.binary("r", v, "v" + std::to_string((i + 2) % n));
    }
    return b.build();
}

void BM_RefinementEl(benchmark::State& state) {
    const RelationalModel m = linear_order_model(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(maximal_simulation(m, m, Language::el));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RefinementEl)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_RefinementAlc(benchmark::State& state) {
    const RelationalModel m = ring(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(maximal_simulation(m, m, Language::alc));
}
BENCHMARK(BM_RefinementAlc)->RangeMultiplier(2)->Range(8, 128);

void BM_ComputeGreFifo(benchmark::State& state) {
    const RelationalModel m = linear_order_model(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(compute_gre(m, Language::el, Scheduler::fifo()));
}
BENCHMARK(BM_ComputeGreFifo)->RangeMultiplier(2)->Range(8, 64);

void BM_BlowupAdversarial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(measure_blowup(n, Scheduler::adversarial_exponential()));
}
BENCHMARK(BM_BlowupAdversarial)->DenseRange(4, 16, 4);

void BM_MakeReEpfol(benchmark::State& state) {
    const RelationalModel m = ring(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(make_re(m, "v0", Language::epfol));
}
BENCHMARK(BM_MakeReEpfol)->DenseRange(4, 10, 2);

void BM_MakeReEl(benchmark::State& state) {
    const RelationalModel m = ring(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(make_re(m, "v0", Language::el));
}
BENCHMARK(BM_MakeReEl)->DenseRange(4, 16, 4);

}  // namespace

BENCHMARK_MAIN();
