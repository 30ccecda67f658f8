// Copyright 2026 The qtraj Authors
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


// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <algorithm>

#include <omp.h>

#include "qtraj/model.hpp"
#include "qtraj/spectrum.hpp"
#include "qtraj/trajectory.hpp"

namespace {

qtraj::TwoLevelParams fig1_params() {
  qtraj::TwoLevelParams p;
  p.gamma = 1.0;
  p.p = 0.8;
  p.DeltaNu = 1.4937;
  p.Omega = 1.4360;
  return p;
}

qtraj::EnsembleSpec ensemble_spec(std::size_t n_traj) {
  qtraj::EnsembleSpec spec;
  spec.model = qtraj::build_two_level_model(fig1_params(), qtraj::Detection::homodyne, -0.1748);
  spec.grid = {2.0, 2000};
  spec.rho0 = qtraj::pauli::ground();
  spec.seed = 7;
  spec.n_traj = n_traj;
  spec.probes.mu = {0.0, 1.0, 2.0, 3.0};
  return spec;
}

void BM_EnsembleSerial(benchmark::State& state) {
  const auto spec = ensemble_spec(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qtraj::run_ensemble_serial(spec));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2000);
}

void BM_EnsembleOpenMP(benchmark::State& state) {
  const auto spec = ensemble_spec(static_cast<std::size_t>(state.range(0)));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(qtraj::run_ensemble(spec, threads));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2000);
}

void BM_AnalyticSerial(benchmark::State& state) {
  auto p = fig1_params();
  p.nu = 1.0;
  const auto m = qtraj::build_two_level_model(p, qtraj::Detection::homodyne, -0.1748);
  const auto mu = qtraj::linspace(0.0, 6.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qtraj::spectrum_analytic_serial(m, qtraj::pauli::ground(), mu, 5.0));
  }
}

void BM_AnalyticOpenMP(benchmark::State& state) {
  auto p = fig1_params();
  p.nu = 1.0;
  const auto m = qtraj::build_two_level_model(p, qtraj::Detection::homodyne, -0.1748);
  const auto mu = qtraj::linspace(0.0, 6.0, static_cast<std::size_t>(state.range(0)));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qtraj::spectrum_analytic(m, qtraj::pauli::ground(), mu, 5.0, threads));
  }
}

void thread_args(benchmark::internal::Benchmark* b, long size) {
  for (int t = 1; t <= std::max(4, omp_get_num_procs()); t *= 2) b->Args({size, t});
}

}  // namespace

BENCHMARK(BM_EnsembleSerial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleOpenMP)->Apply([](auto* b) { thread_args(b, 64); })->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AnalyticSerial)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AnalyticOpenMP)->Apply([](auto* b) { thread_args(b, 16); })->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
