/**
 * @file bench_main.cpp
 * @brief Timings of the closed forms, the full-chain oracle, curve tracing
 *        and the Newton solver at the reference parameters.
 */
#include <benchmark/benchmark.h>

#include "crackqc/bifurcation.hpp"
#include "crackqc/effective.hpp"
#include "crackqc/lattice.hpp"

using namespace crackqc;

namespace {

MaterialParams<double> params() { return validate(4.0, 0.4, 20.0, 0.5); }

ModelKind model_of(int64_t i) { return static_cast<ModelKind>(i); }

void BM_Coefficients(benchmark::State& state) {
    const auto p = params();
    const ModelKind model = model_of(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(coefficients(model, p, 100, 104));
    state.SetLabel(to_string(model));
}
BENCHMARK(BM_Coefficients)->DenseRange(0, 3);

void BM_Oracle(benchmark::State& state) {
    const auto p = params();
    const ModelKind model = model_of(state.range(0));
    const auto chain = make_chain(p, model, 100, 104);
    for (auto _ : state) benchmark::DoNotOptimize(oracle_coefficients(p, chain));
    state.SetLabel(to_string(model));
}
BENCHMARK(BM_Oracle)->DenseRange(0, 3);

void BM_Trace(benchmark::State& state) {
    const auto p = params();
    const auto eq = make_equation(p, exact_coefficients(p, 104));
    const double h = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(trace_curve(eq, 5.0, h));
}
BENCHMARK(BM_Trace)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Newton(benchmark::State& state) {
    const auto p = params();
    const auto chain = make_chain(p, ModelKind::QQC, 100, 104);
    const DisplacementField start{std::vector<double>(chain.j_max + 1, 0.0), 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(newton_solve(p, chain, 2.0, start));
}
BENCHMARK(BM_Newton)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
