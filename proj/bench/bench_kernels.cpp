#include <benchmark/benchmark.h>

#include <vector>

#include "qdb/block_table.hpp"
#include "qdb/kernels.hpp"
#include "qdb/protocol.hpp"

using namespace qdb;

namespace {

constexpr std::size_t kN = 8;

struct Fixture {
    std::span<const std::uint8_t> perms = permutation_table(kN);
    std::vector<Complex> amps;
    std::vector<std::uint8_t> mask;

    Fixture() {
        const std::size_t size = perms.size() / kN;
        Rng rng(1);
        amps.resize(size);
        mask.resize(size);
        for (std::size_t i = 0; i < size; ++i) {
            amps[i] = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
            mask[i] = perms[i * kN] < 2 ? 1 : 0;
        }
    }
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

bool first_small(std::span<const std::uint8_t> p) { return p[0] < 2; }

template <bool Parallel>
void BM_Membership(benchmark::State& state) {
    const auto& f = fixture();
    std::vector<std::uint8_t> mask(f.mask.size());
    for (auto _ : state) {
        if constexpr (Parallel) kernels::parallel::membership(f.perms, kN, first_small, mask);
        else kernels::serial::membership(f.perms, kN, first_small, mask);
        benchmark::DoNotOptimize(mask.data());
    }
}

template <bool Parallel>
void BM_Reflect(benchmark::State& state) {
    const auto& f = fixture();
    std::vector<Complex> amps = f.amps;
    for (auto _ : state) {
        if constexpr (Parallel) {
            const Complex s = kernels::parallel::masked_sum(amps, f.mask);
            kernels::parallel::reflect(amps, f.mask, s * 0.25);
        } else {
            const Complex s = kernels::serial::masked_sum(amps, f.mask);
            kernels::serial::reflect(amps, f.mask, s * 0.25);
        }
        benchmark::DoNotOptimize(amps.data());
    }
}

template <bool Parallel>
void BM_Inner(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state) {
        Complex z = Parallel ? kernels::parallel::inner(f.amps, f.amps) : kernels::serial::inner(f.amps, f.amps);
        benchmark::DoNotOptimize(z);
    }
}

void BM_LumpedExtract256(benchmark::State& state) {
    const auto t = BlockTable::random(8, 256);
    for (auto _ : state) {
        auto db = extract(prepare(t, Engine::lumped, 0), 0xa7);
        benchmark::DoNotOptimize(db);
    }
}

}  // namespace

BENCHMARK(BM_Membership<false>)->Name("membership/serial");
BENCHMARK(BM_Membership<true>)->Name("membership/parallel");
BENCHMARK(BM_Reflect<false>)->Name("reflect/serial");
BENCHMARK(BM_Reflect<true>)->Name("reflect/parallel");
BENCHMARK(BM_Inner<false>)->Name("inner/serial");
BENCHMARK(BM_Inner<true>)->Name("inner/parallel");
BENCHMARK(BM_LumpedExtract256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
