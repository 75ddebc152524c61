#include "gcf/bodies.hpp"
#include "gcf/flow.hpp"
#include "gcf/geometry.hpp"
#include "gcf/identities.hpp"
#include "gcf/support.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

namespace {

gcf::SupportField sample_body(int nphi) {
  std::mt19937_64 rng(1);
  return gcf::random_convex_body(gcf::build_grid(2, {nphi, 2 * nphi}), rng);
}

void BM_FrameMatrix(benchmark::State& state) {
  const auto body = sample_body(static_cast<int>(state.range(0)));
  std::vector<gcf::Sym2> w(body.h.size());
  std::vector<double> scratch;
  for (auto _ : state) {
    gcf::frame_matrix(body.grid, body.h, w, scratch);
    benchmark::DoNotOptimize(w.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(body.h.size()));
}
BENCHMARK(BM_FrameMatrix)->Arg(24)->Arg(48)->Arg(96);

void BM_FlowStep(benchmark::State& state) {
  gcf::FlowConfig c;
  c.resolution = {static_cast<int>(state.range(0)), 2 * static_cast<int>(state.range(0))};
  gcf::FlowState s{gcf::initial_body(c)};
  for (auto _ : state) {
    auto next = gcf::step(s, c);
    benchmark::DoNotOptimize(next.body.h.data());
  }
}
BENCHMARK(BM_FlowStep)->Arg(24)->Arg(48);

void BM_FlowRun(benchmark::State& state) {
  // Short fixed-volume run through the production integrator.
  gcf::FlowConfig c;
  c.max_steps = 1000;
  c.record_every = 1000;
  c.roundness_tolerance = 1e-12;
  for (auto _ : state) {
    auto r = gcf::run(c);
    benchmark::DoNotOptimize(r.final_state.body.h.data());
  }
  state.SetItemsProcessed(state.iterations() * c.max_steps);
}
BENCHMARK(BM_FlowRun)->Unit(benchmark::kMillisecond);

void BM_BuildBundle(benchmark::State& state) {
  const auto body = sample_body(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto bb = gcf::build_bundle(body);
    benchmark::DoNotOptimize(bb.K.data());
  }
}
BENCHMARK(BM_BuildBundle)->Arg(24)->Arg(48)->Unit(benchmark::kMicrosecond);

void BM_IdentityCheck(benchmark::State& state) {
  const auto bb = gcf::build_bundle(sample_body(48));
  const auto id = static_cast<gcf::Identity>(state.range(0));
  state.SetLabel(std::string(gcf::identity_name(id)));
  for (auto _ : state) benchmark::DoNotOptimize(gcf::check_identity(id, bb, 1.0).max_abs);
}
BENCHMARK(BM_IdentityCheck)->DenseRange(0, 9)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
