#include "fraglab/c2.hpp"
#include "fraglab/eval.hpp"
#include "fraglab/query.hpp"
#include "fraglab/sat.hpp"
#include "fraglab/semilinear.hpp"
#include "fraglab/syntax.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace fraglab;

namespace {

Structure random_graph(std::size_t n, double density, unsigned seed) {
    std::mt19937 rng(seed);
    std::bernoulli_distribution edge(density), half(0.5);
    StructureBuilder b(n, Signature({"P"}, {"R"}));
    for (Element a = 0; a < n; ++a) {
        if (half(rng)) b.set_unary("P", a);
        for (Element c = 0; c < n; ++c)
            if (a != c && edge(rng)) b.set_binary("R", a, c);
    }
    return b.build();
}

// both hold on every structure, so eval visits every element
const char* kLocal = "(forall (x) (-> (= x x) (pct-rel >= 0 R (y) (P y))))";
const char* kPres = "(forall (x) (-> (= x x) (count >= 0 ((2 R (y) (P y)) (1 (inv R) (y) (top))))))";

void BM_EvalLocalPct(benchmark::State& st) {
    auto n = static_cast<std::size_t>(st.range(0));
    Structure m = random_graph(n, 0.2, 7);
    Formula f = parse_formula(kLocal);
    for (auto _ : st) benchmark::DoNotOptimize(eval(m, f));
    st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_EvalLocalPct)->RangeMultiplier(2)->Range(16, 512)->Complexity();

void BM_EvalPresburger(benchmark::State& st) {
    auto n = static_cast<std::size_t>(st.range(0));
    Structure m = random_graph(n, 0.2, 11);
    Formula f = parse_formula(kPres);
    for (auto _ : st) benchmark::DoNotOptimize(eval(m, f));
    st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_EvalPresburger)->RangeMultiplier(2)->Range(16, 512)->Complexity();

void BM_SolveEqSystem(benchmark::State& st) {
    // x0 + 2 x1 - x2 = k, x1 - x3 = 0
    Int k = st.range(0);
    EqSystem sys{{{1, 0}, {2, 1}, {-1, 0}, {0, -1}}, {k, 0}};
    for (auto _ : st) benchmark::DoNotOptimize(solve_eq_system(sys));
}
BENCHMARK(BM_SolveEqSystem)->DenseRange(1, 7, 2);

void BM_Member(benchmark::State& st) {
    SemilinearSet s = to_semilinear(solve_eq_system({{{1}, {2}, {-3}}, {1}}), 3);
    Vec u{st.range(0), st.range(0), st.range(0)};
    for (auto _ : st) benchmark::DoNotOptimize(member(s, u));
}
BENCHMARK(BM_Member)->Arg(4)->Arg(16)->Arg(64);

void BM_BoundedSat(benchmark::State& st) {
    Formula f = parse_formula("(and (forall (x) (exists (y) (and (R x y) (not (= x y))))) (pct = 50 (x) (P x)))");
    Signature sig({"P"}, {"R"});
    auto n = static_cast<std::size_t>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(bounded_sat_exact(f, sig, n));
}
BENCHMARK(BM_BoundedSat)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_ReduceToC2(benchmark::State& st) {
    Formula f = parse_formula("(forall (x) (-> (P x) (count >= 1 ((2 R (y) (P y)) (-1 R (y) (top))))))");
    Signature sig({"P"}, {"R"});
    for (auto _ : st) benchmark::DoNotOptimize(reduce_to_c2(f, sig));
}
BENCHMARK(BM_ReduceToC2)->Unit(benchmark::kMillisecond);

void BM_Pump(benchmark::State& st) {
    auto n = static_cast<std::size_t>(st.range(0));
    StructureBuilder b(n, Signature({}, {"R"}));
    for (Element a = 0; a < n; ++a) b.set_binary("R", a, (a + 1) % n);
    Structure cycle = b.build();
    PumpOptions opt;
    opt.cap = n;
    for (auto _ : st) benchmark::DoNotOptimize(pump(cycle, opt));
}
BENCHMARK(BM_Pump)->DenseRange(3, 9, 3)->Unit(benchmark::kMillisecond);

void BM_Homomorphism(benchmark::State& st) {
    Structure m = random_graph(static_cast<std::size_t>(st.range(0)), 0.1, 3);
    ConjunctiveQuery q = parse_query("(q (R x y) (R y z) (R z x) (P x))");
    for (auto _ : st) benchmark::DoNotOptimize(find_homomorphism(q, m));
}
BENCHMARK(BM_Homomorphism)->RangeMultiplier(2)->Range(8, 128);

}  // namespace

BENCHMARK_MAIN();
