#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "primecvp/qaoa.hpp"
#include "primecvp/qubo.hpp"
#include "primecvp/reduction.hpp"
#include "primecvp/refinement.hpp"

using namespace primecvp;

namespace {

CostDiagonal random_diagonal(int n) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(n));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> e(std::size_t{1} << n);
    for (double& v : e) v = u(rng);
    return CostDiagonal::from_energies(std::move(e));
}

AngleSchedule ramp(int p) {
    std::vector<double> g, b;
    for (int k = 1; k <= p; ++k) {
        g.push_back(0.8 * k / p);
        b.push_back(0.4 * (1.0 - static_cast<double>(k) / (p + 1)));
    }
    return {std::move(g), std::move(b)};
}

// args: qubits, depth
void BM_run_qaoa(benchmark::State& state) {
    const CostDiagonal diag = random_diagonal(static_cast<int>(state.range(0)));
    const AngleSchedule angles = ramp(static_cast<int>(state.range(1)));
    for (auto _ : state) {
        StateVector sv = run_qaoa(diag, angles);
        benchmark::DoNotOptimize(sv);
    }
}
BENCHMARK(BM_run_qaoa)->ArgsProduct({{6, 10, 14, 18}, {1, 5}});

// arg: semiprime bit length
void BM_lll_reduce(benchmark::State& state) {
    const PrimeLatticeInstance inst = random_instance(static_cast<int>(state.range(0)), 1.5, 7);
    state.counters["n"] = inst.n;
    for (auto _ : state) {
        ReducedBasis r = lll_reduce(inst.B);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_lll_reduce)->Arg(16)->Arg(64)->Arg(256)->Arg(512);

void BM_prepare_refinement(benchmark::State& state) {
    const PrimeLatticeInstance inst = random_instance(static_cast<int>(state.range(0)), 1.5, 7);
    state.counters["n"] = inst.n;
    for (auto _ : state) {
        RefinementProblem p = prepare_refinement(inst);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_prepare_refinement)->Arg(16)->Arg(40)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
