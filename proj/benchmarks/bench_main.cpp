#include <benchmark/benchmark.h>

#include "kmd/decomp.hpp"
#include "kmd/tensmod.hpp"

using namespace kmd;

namespace {

CartanDatum a2() { return CartanDatum::validate({"1", "2"}, {{2, -1}, {-1, 2}}); }
CartanDatum sl2() { return CartanDatum::validate({"1"}, {{2}}); }
Weight w(std::vector<long long> v) { return Weight(std::move(v)); }

void BM_qbinom(benchmark::State& state) {
    long n = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(qbinom(n, n / 2));
}
BENCHMARK(BM_qbinom)->Arg(8)->Arg(16)->Arg(24);

void BM_solve_exact(benchmark::State& state) {
    size_t n = size_t(state.range(0));
    ExactMatrix m(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            m.at(i, j) = RationalFn(qint(long((i * j) % 5) + 1) + LaurentPoly::v(int(i) - int(j)));
    std::vector<RationalFn> rhs(n, RationalFn(1));
    for (auto _ : state) benchmark::DoNotOptimize(m.solve(rhs));
}
BENCHMARK(BM_solve_exact)->Arg(4)->Arg(8);

void BM_crystal_ball(benchmark::State& state) {
    auto a = a2();
    long long d = state.range(0);
    for (auto _ : state) {
        CrystalGraph g = CrystalGraph::generate(
            CrystalModel::tensor(a, {w({1, 1}), w({1, 1})}), d);
        benchmark::DoNotOptimize(g.nodes().size());
    }
}
BENCHMARK(BM_crystal_ball)->Arg(4)->Arg(8);

void BM_decompose_engines(benchmark::State& state) {
    auto s = sl2();
    Engine e = Engine(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(decompose(s, {w({6}), w({6})}, 14, e).rows.size());
}
BENCHMARK(BM_decompose_engines)
    ->Arg(int(Engine::Crystal))
    ->Arg(int(Engine::Path))
    ->Arg(int(Engine::Character));

void BM_freudenthal(benchmark::State& state) {
    auto a = a2();
    long long k = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(freudenthal_character(a, w({k, k})).dimension());
}
BENCHMARK(BM_freudenthal)->Arg(2)->Arg(3);

void BM_theta(benchmark::State& state) {
    auto a = a2();
    long long d = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(ThetaExpansion::compute(a, d).terms().size());
}
BENCHMARK(BM_theta)->Arg(2)->Arg(4);

void BM_canonical_basis(benchmark::State& state) {
    auto s = sl2();
    for (auto _ : state) {
        TensorModule m = TensorModule::build(s, {w({2}), w({2})}, 8);
        size_t total = 0;
        for (const auto& nu : m.drops()) total += m.canonical_basis(nu).size();
        benchmark::DoNotOptimize(total);
    }
}
BENCHMARK(BM_canonical_basis);

}  // namespace

BENCHMARK_MAIN();
