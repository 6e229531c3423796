#include "dqbfloc/counterexamples.hpp"
#include "dqbfloc/eliminator.hpp"
#include "dqbfloc/io.hpp"
#include "dqbfloc/oracle.hpp"
#include "dqbfloc/pipeline.hpp"
#include "dqbfloc/random_instance.hpp"

#include <benchmark/benchmark.h>

namespace dqbfloc {
namespace {

std::vector<PrenexDqbf> instances(std::size_t count, const RandomBounds& bounds) {
    std::mt19937_64 rng(42);
    std::vector<PrenexDqbf> out;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(random_prenex(rng, bounds));
    return out;
}

void BM_RunningExamplePipeline(benchmark::State& state) {
    const PrenexDqbf p = running_example();
    for (auto _ : state)
        benchmark::DoNotOptimize(run_pipeline(p));
}
BENCHMARK(BM_RunningExamplePipeline);

void BM_Localize(benchmark::State& state) {
    const RandomBounds bounds{static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(0)), 3,
                              static_cast<std::size_t>(state.range(1)), 0};
    std::vector<Dqbf> inputs;
    for (const auto& p : instances(32, bounds))
        inputs.push_back(normalize_to_nnf(p));
    std::size_t i = 0;
    for (auto _ : state) {
        Dqbf f = inputs[i++ % inputs.size()];
        benchmark::DoNotOptimize(localize(f));
    }
}
BENCHMARK(BM_Localize)->Args({3, 8})->Args({6, 32})->Args({10, 128});

void BM_Eliminate(benchmark::State& state) {
    const RandomBounds bounds{static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(0)), 3,
                              static_cast<std::size_t>(state.range(1)), 0};
    std::vector<Dqbf> inputs;
    for (const auto& p : instances(32, bounds)) {
        Dqbf f = normalize_to_nnf(p);
        localize(f);
        inputs.push_back(std::move(f));
    }
    std::size_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(eliminate(inputs[i++ % inputs.size()]));
}
BENCHMARK(BM_Eliminate)->Args({3, 8})->Args({6, 32})->Args({10, 128});

void BM_OracleIsSat(benchmark::State& state) {
    const auto inputs = instances(32, RandomBounds{3, 2, 2, 8, 0});
    std::size_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(is_sat(inputs[i++ % inputs.size()]));
}
BENCHMARK(BM_OracleIsSat);

void BM_DqcirRoundTrip(benchmark::State& state) {
    const auto inputs = instances(8, RandomBounds{8, 8, 4, static_cast<std::size_t>(state.range(0)), 0});
    std::vector<std::string> texts;
    for (const auto& p : inputs)
        texts.push_back(write_dqcir(p));
    std::size_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(write_dqcir(parse_dqcir(texts[i++ % texts.size()])));
}
BENCHMARK(BM_DqcirRoundTrip)->Arg(64)->Arg(1024);

} // namespace
} // namespace dqbfloc

BENCHMARK_MAIN();
