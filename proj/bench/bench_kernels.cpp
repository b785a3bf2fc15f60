#include "jlc/kernels.hpp"
#include "jlc/polynomials.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using jlc::Execution;

const jlc::CoefficientModel& model_a() {
    static const auto m = jlc::CoefficientModel::make({jlc::PowerLaw{2.0, 1}, jlc::ZeroDiagonal{}, "A"});
    return m;
}

// A realistic per-point workload: the modulus of p(lambda) after 2000 steps.
double workload(double lambda) {
    const auto t = jlc::eval_pq(model_a(), lambda, 2000);
    return std::abs(t.p.back());
}

void map_grid_bench(benchmark::State& state, Execution exec) {
    const auto xs = jlc::uniform_grid(-20.0, 20.0, 40.0 / static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(jlc::map_grid(workload, xs, exec));
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(xs.size()));
}

void frobenius_bench(benchmark::State& state, Execution exec) {
    const auto t = jlc::eval_pq(model_a(), jlc::cplx(0.0, 1.0), static_cast<jlc::Index>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(jlc::kernel_frobenius_dense(t.p, t.q, exec));
}

void roots_bench(benchmark::State& state, Execution exec) {
    const auto f = [](double x) { return std::sin(x) * std::cosh(0.01 * x); };
    for (auto _ : state) benchmark::DoNotOptimize(jlc::scan_roots(f, -200.0, 200.0, 0.05, 1e-12, exec));
}

}  // namespace

BENCHMARK_CAPTURE(map_grid_bench, serial, Execution::serial)->Arg(256)->Arg(1024);
BENCHMARK_CAPTURE(map_grid_bench, parallel, Execution::parallel)->Arg(256)->Arg(1024);
BENCHMARK_CAPTURE(frobenius_bench, serial, Execution::serial)->Arg(500)->Arg(2000);
BENCHMARK_CAPTURE(frobenius_bench, parallel, Execution::parallel)->Arg(500)->Arg(2000);
BENCHMARK_CAPTURE(roots_bench, serial, Execution::serial);
BENCHMARK_CAPTURE(roots_bench, parallel, Execution::parallel);

BENCHMARK_MAIN();
