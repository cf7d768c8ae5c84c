// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT
//
// Micro-benchmarks for the hot paths: penalty evaluation and gradient on a
// small dense problem and on the discretized H1 model, gram assembly in the
// nontrivial metric, and a full fixed-penalty inner solve.

#include <benchmark/benchmark.h>

#include "exal/alf.hpp"
#include "exal/regularity.hpp"
#include "exal/solver.hpp"

namespace {

using namespace exal;

AlfConfig default_cfg(double c) {
  return AlfConfig{c, make_phi("linear"), make_psi("const", {1.0})};
}

PrimalDual interior_point(const Problem& p) {
  Rng rng(17);
  return sample_omega_point(p, default_cfg(1.0), rng);
}

void BM_AlfValue_P1(benchmark::State& state) {
  const Problem& p = registry_lookup("p1_eq");
  const AlfConfig cfg = default_cfg(2.0);
  const PrimalDual xi = interior_point(p);
  for (auto _ : state)
    benchmark::DoNotOptimize(alf_value(p, cfg, xi).value);
}
BENCHMARK(BM_AlfValue_P1);

void BM_AlfValue_H1(benchmark::State& state) {
  const Problem& p = registry_lookup("h1_boundary");
  const AlfConfig cfg = default_cfg(2.0);
  const PrimalDual xi = interior_point(p);
  for (auto _ : state)
    benchmark::DoNotOptimize(alf_value(p, cfg, xi).value);
}
BENCHMARK(BM_AlfValue_H1);

void BM_AlfGradient_P1(benchmark::State& state) {
  const Problem& p = registry_lookup("p1_eq");
  const AlfConfig cfg = default_cfg(2.0);
  const PrimalDual xi = interior_point(p);
  for (auto _ : state)
    benchmark::DoNotOptimize(alf_gradient(p, cfg, xi).norm);
}
BENCHMARK(BM_AlfGradient_P1);

void BM_AlfGradient_H1(benchmark::State& state) {
  const Problem& p = registry_lookup("h1_boundary");
  const AlfConfig cfg = default_cfg(2.0);
  const PrimalDual xi = interior_point(p);
  for (auto _ : state)
    benchmark::DoNotOptimize(alf_gradient(p, cfg, xi).norm);
}
BENCHMARK(BM_AlfGradient_H1);

void BM_AssembleGram_H1(benchmark::State& state) {
  const Problem& p = registry_lookup("h1_boundary");
  const PrimalDual xi = interior_point(p);
  for (auto _ : state)
    benchmark::DoNotOptimize(assemble_gram(p, xi.x).norm());
}
BENCHMARK(BM_AssembleGram_H1);

void BM_MinimizeFixedC_P1(benchmark::State& state) {
  const Problem& p = registry_lookup("p1_eq");
  SolverConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(minimize_fixed_c(p, cfg, 4.0, p.start).iterations);
}
BENCHMARK(BM_MinimizeFixedC_P1);

}  // namespace

BENCHMARK_MAIN();
