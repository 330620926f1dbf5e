// Copyright 2026 The qinv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "qinv/dephasing.hpp"
#include "qinv/dfs.hpp"
#include "qinv/lindblad.hpp"
#include "qinv/spectral.hpp"

namespace {

using namespace qinv;

Operator random_hermitian(Eigen::Index n) {
  std::srand(7);
  const Operator a = Operator::Random(n, n);
  return (a + a.adjoint()) * 0.5;
}

void BM_PropagateInvariant(benchmark::State& state) {
  const auto tq = dephasing::build_two_qubit_model(dephasing::DephasingScenario::demo());
  const Operator i0 = random_hermitian(4);
  const TimeGrid grid{1.0, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(propagate_invariant(tq.model, i0, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PropagateInvariant)->Arg(1000)->Arg(8000);

void BM_PropagateState(benchmark::State& state) {
  const auto tq = dephasing::build_two_qubit_model(dephasing::DephasingScenario::demo());
  const Operator rho0 = Operator::Identity(4, 4) / 4.0;
  const TimeGrid grid{1.0, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(propagate_state(tq.model, rho0, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PropagateState)->Arg(1000)->Arg(8000);

void BM_AdjointGenerator(benchmark::State& state) {
  const auto tq = dephasing::build_two_qubit_model(dephasing::DephasingScenario::demo());
  const Operator i0 = random_hermitian(4);
  for (auto _ : state) benchmark::DoNotOptimize(apply_adjoint_generator(tq.model, i0, 0.3));
}
BENCHMARK(BM_AdjointGenerator);

void BM_SpectralDecompose(benchmark::State& state) {
  const Operator m = random_hermitian(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_decompose(m));
}
BENCHMARK(BM_SpectralDecompose)->Arg(2)->Arg(4)->Arg(16)->Arg(64);

void BM_SpectralDecomposeTracked(benchmark::State& state) {
  const Operator m = random_hermitian(state.range(0));
  const EigenSystem ref = spectral_decompose(m);
  const Operator next = m + 1e-3 * random_hermitian(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_decompose(next, ref));
}
BENCHMARK(BM_SpectralDecomposeTracked)->Arg(4)->Arg(16);

void BM_FindStaticDfs(benchmark::State& state) {
  const auto model = dephasing::build_collective_model(static_cast<std::size_t>(state.range(0)),
                                                       CoefficientSchedule::constant(1.0),
                                                       CoefficientSchedule::constant(1.0), 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(find_static_dfs(model, 0.0, 1e-9));
}
BENCHMARK(BM_FindStaticDfs)->Arg(2)->Arg(3)->Arg(4);

void BM_CompareAnalyticNumeric(benchmark::State& state) {
  auto s = dephasing::DephasingScenario::demo();
  s.grid = {2.0, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(dephasing::compare_analytic_numeric(s));
}
BENCHMARK(BM_CompareAnalyticNumeric)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
