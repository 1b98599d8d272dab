#include <benchmark/benchmark.h>

#include "dmv/kernels.hpp"
#include "dmv/solver.hpp"

namespace {

dmv::ConservedState state(int n) {
  dmv::InitialCondition ic;
  ic.kind = dmv::InitialCondition::Kind::perturbed;
  return dmv::perturbed_state(dmv::Grid2D(n, n), ic, dmv::FluidParams{});
}

void rhs(benchmark::State& st, dmv::Backend b) {
  const auto s = state(static_cast<int>(st.range(0)));
  const dmv::FluidParams p;
  dmv::Rhs r(s.grid());
  for (auto _ : st) {
    dmv::kernels::rhs(s, p, b, r);
    benchmark::DoNotOptimize(r.rho[0]);
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(s.grid().size()));
}

void step(benchmark::State& st, dmv::Backend b) {
  const auto s = state(static_cast<int>(st.range(0)));
  const dmv::FluidParams p;
  const double dt = dmv::cfl_dt(s, p, 0.4, b);
  for (auto _ : st) {
    auto next = dmv::step(s, 0.0, dt, p, b);
    benchmark::DoNotOptimize(next.rho[0]);
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(s.grid().size()));
}

void BM_RhsSerial(benchmark::State& st) { rhs(st, dmv::Backend::serial); }
void BM_RhsOpenMP(benchmark::State& st) { rhs(st, dmv::Backend::openmp); }
void BM_StepSerial(benchmark::State& st) { step(st, dmv::Backend::serial); }
void BM_StepOpenMP(benchmark::State& st) { step(st, dmv::Backend::openmp); }

}  // namespace

BENCHMARK(BM_RhsSerial)->Arg(64)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RhsOpenMP)->Arg(64)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_StepSerial)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_StepOpenMP)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond)->UseRealTime();

BENCHMARK_MAIN();
