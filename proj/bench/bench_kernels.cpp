// Serial reference kernels against their OpenMP counterparts.

#include "fcmsc/kernels.hpp"
#include "fcmsc/linalg.hpp"
#include "fcmsc/solver.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using fcmsc::Matrix;
using fcmsc::Vector;
namespace k = fcmsc::kernels;

void BM_ColShrinkSerial(benchmark::State& state) {
    const Matrix base = Matrix::Random(state.range(0), state.range(0));
    for (auto _ : state) {
        Matrix m = base;
        k::col_shrink_serial(m, 1.0);
        benchmark::DoNotOptimize(m.data());
    }
}

void BM_ColShrinkOmp(benchmark::State& state) {
    const Matrix base = Matrix::Random(state.range(0), state.range(0));
    for (auto _ : state) {
        Matrix m = base;
        k::col_shrink_omp(m, 1.0);
        benchmark::DoNotOptimize(m.data());
    }
}

void BM_PairwiseSerial(benchmark::State& state) {
    const Matrix x = Matrix::Random(64, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(k::pairwise_sq_dist_serial(x).data());
}

void BM_PairwiseOmp(benchmark::State& state) {
    const Matrix x = Matrix::Random(64, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(k::pairwise_sq_dist_omp(x).data());
}

void BM_DivideSerial(benchmark::State& state) {
    const auto n = state.range(0);
    const Matrix m = Matrix::Random(n, n);
    const Vector a = Vector::Random(n).array() + 3.0;
    const Vector b = Vector::Random(n).array() + 3.0;
    Matrix out;
    for (auto _ : state) {
        k::spectral_divide_serial(m, a, b, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_DivideOmp(benchmark::State& state) {
    const auto n = state.range(0);
    const Matrix m = Matrix::Random(n, n);
    const Vector a = Vector::Random(n).array() + 3.0;
    const Vector b = Vector::Random(n).array() + 3.0;
    Matrix out;
    for (auto _ : state) {
        k::spectral_divide_omp(m, a, b, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_AssignSerial(benchmark::State& state) {
    const Matrix pts = Matrix::Random(state.range(0), 8);
    const Matrix cen = Matrix::Random(8, 8);
    std::vector<int> labels(static_cast<std::size_t>(pts.rows()));
    for (auto _ : state) benchmark::DoNotOptimize(k::assign_nearest_serial(pts, cen, labels));
}

void BM_AssignOmp(benchmark::State& state) {
    const Matrix pts = Matrix::Random(state.range(0), 8);
    const Matrix cen = Matrix::Random(8, 8);
    std::vector<int> labels(static_cast<std::size_t>(pts.rows()));
    for (auto _ : state) benchmark::DoNotOptimize(k::assign_nearest_omp(pts, cen, labels));
}

void BM_FcmscIteration(benchmark::State& state) {
    const auto n = state.range(0);
    const Matrix x = (Matrix::Random(60, n).array() + 1.0) / 2.0;
    fcmsc::SolverConfig cfg;
    cfg.max_iter = 1;
    for (auto _ : state) benchmark::DoNotOptimize(fcmsc::fcmsc_solve(x, cfg).z.data());
}

} // namespace

BENCHMARK(BM_ColShrinkSerial)->Arg(128)->Arg(512);
BENCHMARK(BM_ColShrinkOmp)->Arg(128)->Arg(512);
BENCHMARK(BM_PairwiseSerial)->Arg(256)->Arg(1024);
BENCHMARK(BM_PairwiseOmp)->Arg(256)->Arg(1024);
BENCHMARK(BM_DivideSerial)->Arg(256)->Arg(1024);
BENCHMARK(BM_DivideOmp)->Arg(256)->Arg(1024);
BENCHMARK(BM_AssignSerial)->Arg(1024)->Arg(8192);
BENCHMARK(BM_AssignOmp)->Arg(1024)->Arg(8192);
BENCHMARK(BM_FcmscIteration)->Arg(90)->Arg(200);

BENCHMARK_MAIN();
