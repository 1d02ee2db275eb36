#include "msflow/ej_complex.hpp"
#include "msflow/gf2.hpp"
#include "msflow/msf_format.hpp"
#include "msflow/poset.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <string>

namespace {

using namespace msflow;

flow::FlowSystem fixture(const std::string& name) {
    return flow::load_msf(std::string(MSFLOW_BENCH_FIXTURES) + "/" + name);
}

void BM_Rank(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937 rng(1);
    std::bernoulli_distribution entry(0.5);
    gf2::MatrixGF2 m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) m.set(r, c, entry(rng));
    }
    for (auto _ : state) benchmark::DoNotOptimize(gf2::rank(m));
}
BENCHMARK(BM_Rank)->RangeMultiplier(4)->Range(4, 1024);

void BM_BuildComplex(benchmark::State& state) {
    const auto s = fixture("fig6.msf");
    for (auto _ : state) benchmark::DoNotOptimize(ej::build_complex(s));
}
BENCHMARK(BM_BuildComplex);

void BM_Isomorphism(benchmark::State& state) {
    const auto a = poset::face_poset(fixture("fig4-X1.msf"));
    const auto b = poset::face_poset(fixture("fig4-X2.msf"));
    for (auto _ : state) benchmark::DoNotOptimize(poset::is_isomorphic(a, b));
}
BENCHMARK(BM_Isomorphism);

void BM_Census(benchmark::State& state) {
    const auto s = fixture("fig4.msf");
    for (auto _ : state) benchmark::DoNotOptimize(poset::census(s));
}
BENCHMARK(BM_Census);

} // namespace

BENCHMARK_MAIN();
