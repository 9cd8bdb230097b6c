// Serial reference against the OpenMP variant for each parallel kernel.
#include <benchmark/benchmark.h>

#include <random>

#include "capwave/dispersion.hpp"
#include "capwave/model.hpp"
#include "capwave/resonance.hpp"
#include "capwave/spectral.hpp"

using namespace capwave;

namespace {

SpectralField random_field(const Grid1D& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    SpectralField f(g);
    for (long j = 0; j < g.dealias_limit(); ++j) {
        const cplx z(nd(rng), j == 0 ? 0.0 : nd(rng));
        f[g.index_of(j)] = z;
        if (j > 0) f[g.index_of(-j)] = std::conj(z);
    }
    return f;
}

Exec policy(const benchmark::State& s) { return s.range(1) == 0 ? Exec::serial : Exec::parallel; }

void BM_apply_multiplier(benchmark::State& state) {
    const Grid1D g(static_cast<std::size_t>(state.range(0)), 2.0 * M_PI);
    const Multiplier m = tabulate_real(g, [](double k) { return sigma(k, 0.1); });
    const SpectralField f = random_field(g, 1);
    for (auto _ : state) benchmark::DoNotOptimize(apply_multiplier(m, f, policy(state)));
}

void BM_product(benchmark::State& state) {
    const Grid1D g(static_cast<std::size_t>(state.range(0)), 2.0 * M_PI);
    const SpectralField f = random_field(g, 2), h = random_field(g, 3);
    for (auto _ : state) benchmark::DoNotOptimize(product(f, h, policy(state)));
}

void BM_model_rhs(benchmark::State& state) {
    const Grid1D g(static_cast<std::size_t>(state.range(0)), 2.0 * M_PI);
    const TruncatedModel model(g, 0.1, policy(state));
    FieldSet u(g);
    for (int c = 0; c < 4; ++c) u[c] = 0.01 * random_field(g, 10 + c);
    for (auto _ : state) benchmark::DoNotOptimize(model.rhs(u));
}

void BM_critical_bonds(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(critical_bonds(2.0, policy(state)));
}

}  // namespace

BENCHMARK(BM_apply_multiplier)->ArgsProduct({{1 << 10, 1 << 14}, {0, 1}});
BENCHMARK(BM_product)->ArgsProduct({{1 << 10, 1 << 14}, {0, 1}});
BENCHMARK(BM_model_rhs)->ArgsProduct({{1 << 10, 1 << 13}, {0, 1}});
BENCHMARK(BM_critical_bonds)->Args({0, 0})->Args({0, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
