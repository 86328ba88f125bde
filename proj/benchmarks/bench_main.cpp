#include <benchmark/benchmark.h>

#include <random>

#include "sgsp/density.hpp"
#include "sgsp/norms.hpp"
#include "sgsp/probes.hpp"
#include "sgsp/random_states.hpp"
#include "sgsp/semigroup.hpp"
#include "sgsp/shadowing.hpp"

using namespace sgsp;

namespace {

void BM_LpNorm(benchmark::State& state) {
    double h = 1.0 / double(state.range(0));
    auto f = GridFunction::sampled(h, 8.0, [](double x) { return 2.0 + std::sin(1.3 * x); });
    auto v = WeightFunction::exp_decay(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(lp_v_norm(f, v, 1.0).value);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LpNorm)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_TranslateAligned(benchmark::State& state) {
    auto f = tent_function(0.01, 20.0, 10.0, 5.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(translate(f, 1.0));
}
BENCHMARK(BM_TranslateAligned);

void BM_TranslateInterpolated(benchmark::State& state) {
    auto f = tent_function(0.01, 20.0, 10.0, 5.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(translate(f, 0.3371));
}
BENCHMARK(BM_TranslateInterpolated);

void BM_SecondOrderApply(benchmark::State& state) {
    int n = int(state.range(0));
    SecondOrderEngine eng(1.0, 1.0, 3.0, n);
    std::mt19937_64 rng(1);
    CoefficientPair u = random_coefficient_pair(rng, 3.0, n);
    double t = 0.0;
    for (auto _ : state) {
        t += 1e-6;  // defeat the flow cache: fresh matrix exponential each pass
        benchmark::DoNotOptimize(second_order_apply(0.5 + t, u, eng).value);
    }
}
BENCHMARK(BM_SecondOrderApply)->Arg(30)->Arg(60);

void BM_BlackScholesNorm(benchmark::State& state) {
    std::mt19937_64 rng(2);
    MonomialCombo combo = random_monomial_combo(rng, 4);
    SpaceParams pars{2.0, 4.0, 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(y_stau_norm(combo, pars).value);
}
BENCHMARK(BM_BlackScholesNorm);

void BM_ShadowingConstruct(benchmark::State& state) {
    std::mt19937_64 rng(3);
    auto v = WeightFunction::exp_decay(1.0);
    ShadowingSpec spec = random_shadowing_spec(rng, v, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(construct_shadowing_point(spec, 0.05));
}
BENCHMARK(BM_ShadowingConstruct);

void BM_ShadowingVerify(benchmark::State& state) {
    std::mt19937_64 rng(4);
    auto v = WeightFunction::exp_decay(1.0);
    ShadowingSpec spec = random_shadowing_spec(rng, v, 1.0);
    ShadowingCertificate cert = construct_shadowing_point(spec, 0.05);
    for (auto _ : state) benchmark::DoNotOptimize(verify_shadowing(cert, spec, 0.01));
}
BENCHMARK(BM_ShadowingVerify);

void BM_DensityEstimate(benchmark::State& state) {
    std::vector<std::pair<double, double>> blocks;
    double horizon = std::pow(4.0, 10);
    for (double lo = 1.0; lo < horizon; lo *= 4.0) blocks.emplace_back(lo, 2.0 * lo);
    IntervalUnion set(blocks);
    for (auto _ : state)
        benchmark::DoNotOptimize(density_estimate(set, horizon, 1.0, DensityMode::Upper));
}
BENCHMARK(BM_DensityEstimate);

void BM_IrregularVector(benchmark::State& state) {
    auto v = WeightFunction::exp_decay(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(irregular_vector(v, 0.1, 1e4));
}
BENCHMARK(BM_IrregularVector);

}  // namespace

BENCHMARK_MAIN();
