#include <benchmark/benchmark.h>

#include "huadom/aut.hpp"
#include "huadom/equiv.hpp"
#include "huadom/levi.hpp"

using namespace huadom;

namespace {

const HuaSpec& fixture() {
    static const HuaSpec spec{CartanSpec::type_i(2, 2), {{2, 1.0}, {2, 2.0}}};
    return spec;
}

void GenericNormDiag(benchmark::State& state) {
    const CartanSpec spec = CartanSpec::type_i(static_cast<int>(state.range(0)),
                                               static_cast<int>(state.range(0)));
    Rng rng(1);
    const BasePoint z = sample_base_interior(spec, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(generic_norm_diag(spec, z));
    }
}
BENCHMARK(GenericNormDiag)->Arg(2)->Arg(4)->Arg(8);

void HuaMargin(benchmark::State& state) {
    Rng rng(2);
    const HuaPoint p = sample_hua_interior(fixture(), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hua_margin(fixture(), p));
    }
}
BENCHMARK(HuaMargin);

void GammaApply(benchmark::State& state) {
    Rng rng(3);
    const GammaAut g = random_gamma(fixture(), 7);
    const HuaPoint p = sample_hua_interior(fixture(), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gamma_apply(g, p));
    }
}
BENCHMARK(GammaApply);

void LeviClassify(benchmark::State& state) {
    Rng rng(4);
    const HuaPoint b = sample_hua_boundary(fixture(), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(classify_pseudoconvexity(fixture(), b));
    }
}
BENCHMARK(LeviClassify);

void EquivDecide(benchmark::State& state) {
    const HuaSpec s1{CartanSpec::ball(2), {{2, 1.0}, {2, 2.0}, {3, 3.0}}};
    const HuaSpec s2{CartanSpec::ball(4), {{3, 3.0}, {2, 2.0}}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(hua_equivalent(s1, s2));
    }
}
BENCHMARK(EquivDecide);

void RecoverBlocks(benchmark::State& state) {
    const EllipsoidSpec spec{{{2, 2.0}, {2, 2.0}, {3, 3.0}}};
    CMatrix l = CMatrix::Zero(7, 7);
    l.block(0, 2, 2, 2) = random_unitary(2, 1);
    l.block(2, 0, 2, 2) = random_unitary(2, 2);
    l.block(4, 4, 3, 3) = random_unitary(3, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(recover_block_structure(l, spec, spec));
    }
}
BENCHMARK(RecoverBlocks);

} // namespace

BENCHMARK_MAIN();
