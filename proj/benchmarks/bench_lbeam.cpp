#include <benchmark/benchmark.h>

#include "lbeam/ber_sim.hpp"
#include "lbeam/channel.hpp"
#include "lbeam/linalg.hpp"
#include "lbeam/precoder.hpp"
#include "lbeam/rng.hpp"

namespace {

using namespace lbeam;

CMatrix random_matrix(int rows, int cols, RngStream& rng) {
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.next_complex_gaussian();
    return m;
}

CMatrix random_hpd(int n, RngStream& rng) {
    const CMatrix g = random_matrix(n, n, rng);
    CMatrix a = g.adjoint() * g;
    for (int i = 0; i < n; ++i) a(i, i) += cx{0.1, 0.0};
    return a;
}

void BM_HermitianEig(benchmark::State& state) {
    RngStream rng(42);
    const CMatrix a = random_hpd(static_cast<int>(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(a));
}
BENCHMARK(BM_HermitianEig)->Arg(4)->Arg(8)->Arg(16);

void BM_CholeskyLower(benchmark::State& state) {
    RngStream rng(43);
    const CMatrix a = random_hpd(static_cast<int>(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(cholesky_lower(a));
}
BENCHMARK(BM_CholeskyLower)->Arg(8)->Arg(16);

void BM_GedDiagonalize(benchmark::State& state) {
    const ChannelSet cs = draw_channel_set(SystemDims{}, 1.0, RngStream(7));
    const auto pair = build_pair(cs, 0);
    for (auto _ : state) benchmark::DoNotOptimize(ged_diagonalize(pair.first, pair.second));
}
BENCHMARK(BM_GedDiagonalize);

void BM_SimultaneousDiagonalize(benchmark::State& state) {
    const ChannelSet cs = draw_channel_set(SystemDims{}, 1.0, RngStream(7));
    const auto pair = build_pair(cs, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(simultaneous_diagonalize(pair.first, pair.second));
}
BENCHMARK(BM_SimultaneousDiagonalize);

void BM_OriginalPrecoder(benchmark::State& state) {
    const ChannelSet cs = draw_channel_set(SystemDims{}, 1.0, RngStream(11));
    for (auto _ : state) benchmark::DoNotOptimize(original_precoder(cs, 0));
}
BENCHMARK(BM_OriginalPrecoder);

void BM_ProposedPrecoder(benchmark::State& state) {
    const ChannelSet cs = draw_channel_set(SystemDims{}, 1.0, RngStream(11));
    for (auto _ : state) benchmark::DoNotOptimize(proposed_precoder(cs, 0));
}
BENCHMARK(BM_ProposedPrecoder);

void BM_SimulateTrial(benchmark::State& state) {
    const ChannelSet cs = draw_channel_set(SystemDims{}, 0.1, RngStream(13));
    std::uint64_t t = 0;
    for (auto _ : state) {
        RngStream rng = RngStream(99).split(t++);
        benchmark::DoNotOptimize(simulate_trial(cs, Scheme::Proposed, rng));
    }
}
BENCHMARK(BM_SimulateTrial);

}  // namespace

BENCHMARK_MAIN();
