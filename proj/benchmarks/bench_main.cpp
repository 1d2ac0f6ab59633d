#include <benchmark/benchmark.h>

#include "hrc/inference.hpp"
#include "hrc/layout_gen.hpp"
#include "hrc/planner.hpp"
#include "hrc/trial.hpp"

using namespace hrc;

namespace {

Layout layout_with(int tasks) { return random_layout(tasks - 1, 1, 42 + static_cast<std::uint64_t>(tasks)); }

void BM_Solve(benchmark::State& st) {
  const Layout layout = layout_with(static_cast<int>(st.range(0)));
  const TeamState state = initial_state(layout);
  for (auto _ : st) benchmark::DoNotOptimize(solve(PlanQuery{state, layout}).makespan);
}
BENCHMARK(BM_Solve)->DenseRange(3, 8);

void BM_Enumerate(benchmark::State& st) {
  const Layout layout = layout_with(static_cast<int>(st.range(0)));
  const TeamState state = initial_state(layout);
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_makespans(PlanQuery{state, layout}).size());
}
BENCHMARK(BM_Enumerate)->DenseRange(3, 6);

void BM_PosteriorUpdate(benchmark::State& st) {
  const Layout layout = layout_with(static_cast<int>(st.range(0)));
  const InferenceParams params;
  const Belief prior = reset_prior(initial_state(layout).remaining);
  const Point h = layout.human_start;
  const Point next{h.x + 0.7 * layout.velocity, h.y + 0.5 * layout.velocity};
  for (auto _ : st) benchmark::DoNotOptimize(posterior_update(prior, h, next, layout, params).probs.data());
}
BENCHMARK(BM_PosteriorUpdate)->Arg(3)->Arg(6)->Arg(8);

void BM_RunTrial(benchmark::State& st) {
  TrialSetup setup;
  setup.layout = layout_with(6);
  setup.policy = static_cast<PolicyKind>(st.range(0));
  setup.seed = 7;
  for (auto _ : st) benchmark::DoNotOptimize(run_trial(setup).completion_time);
  st.SetLabel(to_string(setup.policy));
}
BENCHMARK(BM_RunTrial)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
