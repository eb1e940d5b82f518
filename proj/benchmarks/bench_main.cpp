#include <benchmark/benchmark.h>

#include <random>

#include "lutrev/npn.hpp"

namespace {

void bm_npn_canonical6(benchmark::State& state) {
    std::mt19937_64 rng(7);
    std::vector<uint64_t> tables(256);
    for (auto& t : tables) t = rng();
    size_t i = 0;
    for (auto _ : state) {
        auto c = lutrev::npn_canonical(lutrev::TtBits{tables[i++ & 255], 6});
        benchmark::DoNotOptimize(c.canonical.bits);
    }
}
BENCHMARK(bm_npn_canonical6);

void bm_npn_canonical4(benchmark::State& state) {
    std::mt19937_64 rng(7);
    std::vector<uint64_t> tables(256);
    for (auto& t : tables) t = rng() & 0xffff;
    size_t i = 0;
    for (auto _ : state) {
        auto c = lutrev::npn_canonical(lutrev::TtBits{tables[i++ & 255], 4});
        benchmark::DoNotOptimize(c.canonical.bits);
    }
}
BENCHMARK(bm_npn_canonical4);

} // namespace

BENCHMARK_MAIN();
