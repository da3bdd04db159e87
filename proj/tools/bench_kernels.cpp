// Benchmark of the OpenMP transform/nonlinearity kernels against the serial
// reference implementations, at the sizes the solvers actually use.
#include <benchmark/benchmark.h>

#include <random>

#include "gpstrip/kernels.hpp"

using namespace gpstrip;

namespace {

struct Setup {
    int nx, K, M;
    cvector coeffs, phys, out;
    rvector table;
    Setup(int nx_, int K_) : nx(nx_), K(K_), M(4 * K_) {
        coeffs.resize((size_t)(K + 1) * nx);
        phys.resize((size_t)nx * M);
        out.resize((size_t)(K + 1) * nx);
        table = kernels::cosine_table(K, M);
        std::mt19937 rng(12345);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& c : coeffs) c = complexd{u(rng), u(rng)};
    }
};

void BM_to_quadrature_omp(benchmark::State& state) {
    Setup s((int)state.range(0), 8);
    for (auto _ : state) {
        kernels::to_quadrature(s.coeffs, s.K, s.nx, s.table, s.M, s.phys);
        benchmark::DoNotOptimize(s.phys.data());
    }
}

void BM_to_quadrature_serial(benchmark::State& state) {
    Setup s((int)state.range(0), 8);
    for (auto _ : state) {
        kernels::ref::to_quadrature(s.coeffs, s.K, s.nx, s.table, s.M, s.phys);
        benchmark::DoNotOptimize(s.phys.data());
    }
}

void BM_cubic_omp(benchmark::State& state) {
    Setup s((int)state.range(0), 8);
    for (auto _ : state) {
        kernels::cubic_term(s.coeffs, s.K, s.nx, s.table, s.M, s.out);
        benchmark::DoNotOptimize(s.out.data());
    }
}

void BM_cubic_serial(benchmark::State& state) {
    Setup s((int)state.range(0), 8);
    for (auto _ : state) {
        kernels::ref::cubic_term(s.coeffs, s.K, s.nx, s.table, s.M, s.out);
        benchmark::DoNotOptimize(s.out.data());
    }
}

void BM_from_quadrature_omp(benchmark::State& state) {
    Setup s((int)state.range(0), 8);
    kernels::ref::to_quadrature(s.coeffs, s.K, s.nx, s.table, s.M, s.phys);
    for (auto _ : state) {
        kernels::from_quadrature(s.phys, s.K, s.nx, s.table, s.M, s.out);
        benchmark::DoNotOptimize(s.out.data());
    }
}

void BM_from_quadrature_serial(benchmark::State& state) {
    Setup s((int)state.range(0), 8);
    kernels::ref::to_quadrature(s.coeffs, s.K, s.nx, s.table, s.M, s.phys);
    for (auto _ : state) {
        kernels::ref::from_quadrature(s.phys, s.K, s.nx, s.table, s.M, s.out);
        benchmark::DoNotOptimize(s.out.data());
    }
}

}  // namespace

BENCHMARK(BM_to_quadrature_serial)->Arg(801)->Arg(1601)->Arg(3201);
BENCHMARK(BM_to_quadrature_omp)->Arg(801)->Arg(1601)->Arg(3201);
BENCHMARK(BM_from_quadrature_serial)->Arg(801)->Arg(1601)->Arg(3201);
BENCHMARK(BM_from_quadrature_omp)->Arg(801)->Arg(1601)->Arg(3201);
BENCHMARK(BM_cubic_serial)->Arg(801)->Arg(1601)->Arg(3201);
BENCHMARK(BM_cubic_omp)->Arg(801)->Arg(1601)->Arg(3201);

BENCHMARK_MAIN();
