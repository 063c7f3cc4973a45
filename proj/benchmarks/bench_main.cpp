#include <benchmark/benchmark.h>

#include <random>

#include "heis/automorphy.hpp"
#include "heis/eisenstein.hpp"
#include "heis/specfun.hpp"
#include "heis/twist_lfunc.hpp"

using namespace heis;

namespace {

const cplx w0 = 2.5;

void BM_CocycleClosedForm(benchmark::State& state)
{
    std::mt19937_64 rng(1);
    modgroup::RealMatrix M(modgroup::random_matrix(rng, 50)), N(modgroup::random_matrix(rng, 50));
    for (auto _ : state)
        benchmark::DoNotOptimize(automorphy::r_closed(M, N, 0.5));
}
BENCHMARK(BM_CocycleClosedForm);

void BM_ThetaMultiplier(benchmark::State& state)
{
    std::mt19937_64 rng(2);
    auto g = modgroup::random_matrix(rng, 60, 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(automorphy::theta_multiplier(g));
}
BENCHMARK(BM_ThetaMultiplier);

void BM_Hyp2f1(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(specfun::hyp2f1(cplx(1.5, 0.3), cplx(5.5, 0.3), cplx(3.75, 0.3), cplx(0.5, 0.05)));
}
BENCHMARK(BM_Hyp2f1);

void BM_WhittakerW(benchmark::State& state)
{
    double z = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::whittaker_w(0.25, 2.0, z));
        z = z < 40 ? z * 1.3 : 0.1;
    }
}
BENCHMARK(BM_WhittakerW);

void BM_EisensteinConstruct(benchmark::State& state)
{
    auto ctx = eisenstein::SpectralContext::get(4, WeightClass::Half);
    for (auto _ : state) {
        eisenstein::EisensteinSeries e(ctx, 1, static_cast<double>(state.range(0)));
        benchmark::DoNotOptimize(e.class_count());
    }
}
BENCHMARK(BM_EisensteinConstruct)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_EisensteinEval(benchmark::State& state)
{
    auto ctx = eisenstein::SpectralContext::get(4, WeightClass::Half);
    eisenstein::EisensteinSeries e(ctx, 1, static_cast<double>(state.range(0)));
    cplx z(0.13, 0.9);
    for (auto _ : state)
        benchmark::DoNotOptimize(e(z, w0));
}
BENCHMARK(BM_EisensteinEval)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMicrosecond);

void BM_CTensor(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(twist_lfunc::c_tensor(cplx(3.0, 1.0), w0, 0.1, 0.5));
}
BENCHMARK(BM_CTensor);

void BM_SplitTable(benchmark::State& state)
{
    eisenstein::FourierExpansion e;
    e.w = w0;
    for (int n = -8; n <= 8; ++n)
        if (n != 0)
            e.coeffs[n] = 1.0 / (1.0 + n * n);
    auto src = twist_lfunc::finite_split_source(twist_lfunc::twist(e, arith::DirichletCharacter::principal(1)));
    for (auto _ : state) {
        twist_lfunc::SplitTable t(src, 0.1, 1.0, {.decay_height = 1e5});
        benchmark::DoNotOptimize(t.value(cplx(0.5, 2.0)));
    }
}
BENCHMARK(BM_SplitTable)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
