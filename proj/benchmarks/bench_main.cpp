#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

#include "qgs/cnf.hpp"
#include "qgs/oracle.hpp"
#include "qgs/sim.hpp"

namespace {

// Car model with the cross-tree constraint, 10 variables and 8 clauses.
qgs::Cnf car() {
  return qgs::parse_dimacs(
      "p cnf 10 8\n1 0\n2 0\n3 0\n6 0\n-10 9 0\n4 5 0\n7 8 0\n-7 -8 0\n");
}

qgs::Cnf random_3cnf(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<qgs::Clause> clauses;
  std::vector<int> vars(n);
  for (std::size_t i = 0; i < n; ++i) vars[i] = static_cast<int>(i + 1);
  for (std::size_t c = 0; c < m; ++c) {
    std::shuffle(vars.begin(), vars.end(), rng);
    clauses.push_back(qgs::Clause{rng() & 1 ? vars[0] : -vars[0], rng() & 1 ? vars[1] : -vars[1],
                                  rng() & 1 ? vars[2] : -vars[2]});
  }
  return qgs::Cnf(n, std::move(clauses));
}

void BM_FastBackend(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto threads = static_cast<std::size_t>(state.range(1));
  const auto cnf = random_3cnf(n, 2 * n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(qgs::run_fast_backend(cnf, 4, {threads, {}}));
  state.SetItemsProcessed(state.iterations() * 4 * (std::int64_t{1} << n));
}
BENCHMARK(BM_FastBackend)->Args({16, 1})->Args({20, 1})->Args({20, 4})->Args({22, 4})->Unit(benchmark::kMillisecond);

void BM_GateBackendCar(benchmark::State& state) {
  const auto circuit = qgs::build_grover_rounds(car(), static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qgs::run_gate_backend(circuit));
  state.counters["gates"] = static_cast<double>(circuit.gate_count());
}
BENCHMARK(BM_GateBackendCar)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_CountModels(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto cnf = random_3cnf(n, static_cast<std::size_t>(3 * n), 7);
  for (auto _ : state) benchmark::DoNotOptimize(qgs::count_models(cnf, {0}));
}
BENCHMARK(BM_CountModels)->Arg(20)->Arg(30)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_Measure(benchmark::State& state) {
  const auto sv = qgs::run_fast_backend(car(), 5);
  const auto shots = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(qgs::measure(sv, shots, seed++));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(shots));
}
BENCHMARK(BM_Measure)->Arg(1000)->Arg(100000);

void BM_BuildOracle(benchmark::State& state) {
  const auto cnf = random_3cnf(64, 256, 3);
  for (auto _ : state) benchmark::DoNotOptimize(qgs::build_oracle(cnf));
}
BENCHMARK(BM_BuildOracle);

}  // namespace

BENCHMARK_MAIN();
