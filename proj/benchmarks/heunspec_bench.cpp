#include <benchmark/benchmark.h>

#include "heunspec/frobenius.hpp"
#include "heunspec/oracle.hpp"
#include "heunspec/precision.hpp"
#include "heunspec/rpm.hpp"
#include "heunspec/variational.hpp"

namespace {

using namespace heunspec;

const DimensionlessProblem kProblem{1.0, 2.449489742783178};

void BM_BuildMatrices(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    PrecisionGuard guard(50);
    for (auto _ : state) {
        auto hs = build_matrices(kProblem, N, 50);
        benchmark::DoNotOptimize(hs.H.at(N - 1, N - 1));
    }
}
BENCHMARK(BM_BuildMatrices)->Arg(10)->Arg(20)->Arg(30);

void BM_VariationalSpectrum(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto spec = variational_spectrum(kProblem, N, 50, 3);
        benchmark::DoNotOptimize(spec.values[0]);
    }
}
BENCHMARK(BM_VariationalSpectrum)->Arg(10)->Arg(20);

void BM_RiccatiSeries(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    PrecisionGuard guard(50);
    const Real gamma = 1, b = Real(2.449489742783178);
    for (auto _ : state) {
        auto s = riccati_coefficients(gamma, b, Real(5), M);
        benchmark::DoNotOptimize(s.coefficients.back());
    }
}
BENCHMARK(BM_RiccatiSeries)->Arg(15)->Arg(30);

void BM_HankelDeterminant(benchmark::State& state) {
    const int D = static_cast<int>(state.range(0));
    PrecisionGuard guard(50);
    const auto series =
        riccati_coefficients(Real(1), Real(1), Real(5), 2 * D + 1);
    for (auto _ : state) {
        auto det = hankel_determinant(series, {D, 0});
        benchmark::DoNotOptimize(det.scaled);
    }
}
BENCHMARK(BM_HankelDeterminant)->Arg(4)->Arg(8)->Arg(12);

void BM_OracleShot(benchmark::State& state) {
    for (auto _ : state) {
        auto shot = integrate_radial(kProblem, 5.0);
        benchmark::DoNotOptimize(shot.mismatch);
    }
}
BENCHMARK(BM_OracleShot);

void BM_TruncationSolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto sols = solve_truncation(n, Rational(1), 50);
        benchmark::DoNotOptimize(sols.back().b_root);
    }
}
BENCHMARK(BM_TruncationSolve)->Arg(2)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
