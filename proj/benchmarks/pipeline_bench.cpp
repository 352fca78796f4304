// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "factorsat/bundle.hpp"
#include "factorsat/scaling.hpp"
#include "factorsat/verify.hpp"

namespace factorsat {
namespace {

std::pair<Natural, Natural> primes(benchmark::State& state) {
  const auto d = static_cast<unsigned>(state.range(0));
  return sample_prime_pair(d, d, 1);
}

void BM_BuildCircuit(benchmark::State& state) {
  const auto [p, q] = primes(state);
  for (auto _ : state) benchmark::DoNotOptimize(build_circuit(p, q));
  state.counters["gates"] = static_cast<double>(build_circuit(p, q).ands.size() + build_circuit(p, q).xors.size());
}
BENCHMARK(BM_BuildCircuit)->DenseRange(8, 32, 8)->Unit(benchmark::kMillisecond);

void BM_Reduce(benchmark::State& state) {
  const auto [p, q] = primes(state);
  const ConstraintSystem cs = build_circuit(p, q);
  for (auto _ : state) benchmark::DoNotOptimize(reduce_to_fixpoint(cs));
}
BENCHMARK(BM_Reduce)->DenseRange(8, 32, 8)->Unit(benchmark::kMillisecond);

void BM_ToCnf(benchmark::State& state) {
  const auto [p, q] = primes(state);
  const ReducedSystem rs = reduce_to_fixpoint(build_circuit(p, q));
  for (auto _ : state) benchmark::DoNotOptimize(to_cnf(rs));
}
BENCHMARK(BM_ToCnf)->DenseRange(8, 32, 8)->Unit(benchmark::kMillisecond);

void BM_AssembleIsing(benchmark::State& state) {
  const auto [p, q] = primes(state);
  const ReducedSystem rs = reduce_to_fixpoint(build_circuit(p, q));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(rs));
}
BENCHMARK(BM_AssembleIsing)->DenseRange(8, 32, 8)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(predict(state.range(0)));
}
BENCHMARK(BM_Predict)->Arg(64)->Arg(30000);

void BM_CountModels(benchmark::State& state) {
  const auto [p, q] = primes(state);
  GenerateOptions o;
  o.p = p;
  o.q = q;
  const CnfFormula f = generate(o).cnf.formula;
  for (auto _ : state) benchmark::DoNotOptimize(count_models(f, 4, 1 << 20));
}
BENCHMARK(BM_CountModels)->DenseRange(3, 6, 1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace factorsat

BENCHMARK_MAIN();
