// Serial reference paths against their OpenMP counterparts on the default
// 16-atom model. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "aslam/evaluation.hpp"

using namespace aslam;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

struct Model {
  KnownPoseProblem problem{ProblemConfig{}};
  SimplexGrid grid{problem.map_count(), 4};
  BeliefTransition eta = build_known_pose_transition(grid, problem.likelihood(), problem.poses().size());
};

const Model& model() {
  static const Model m;
  return m;
}

void BM_ProblemKernels(benchmark::State& state) {
  for (auto _ : state) {
    KnownPoseProblem p(ProblemConfig{}, exec_of(state));
    benchmark::DoNotOptimize(p.likelihood().data().data());
  }
}

void BM_BeliefTransition(benchmark::State& state) {
  const auto& m = model();
  for (auto _ : state) {
    auto eta = build_known_pose_transition(m.grid, m.problem.likelihood(), m.problem.poses().size(), exec_of(state));
    benchmark::DoNotOptimize(eta.entries().data());
  }
}

void BM_ValueIteration(benchmark::State& state) {
  const auto& m = model();
  SolveOptions o;
  o.exec = exec_of(state);
  for (auto _ : state) {
    auto p = solve_policy(m.problem, m.grid, m.eta, ExplorationKind::rao, 200.0, o);
    benchmark::DoNotOptimize(p.solution.value.data());
  }
}

void BM_Trials(benchmark::State& state) {
  const auto& m = model();
  const auto planned = solve_policy(m.problem, m.grid, m.eta, ExplorationKind::rao, 200.0, {});
  const auto rule = tabulated_rule(planned.policy, m.problem, m.grid);
  const std::vector<double> b0(m.problem.map_count(), 1.0 / static_cast<double>(m.problem.map_count()));
  for (auto _ : state) {
    auto r = run_trials(m.problem, m.grid, rule, b0, 500, 1, {}, exec_of(state));
    benchmark::DoNotOptimize(r.data());
  }
}

}  // namespace

BENCHMARK(BM_ProblemKernels)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BeliefTransition)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ValueIteration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Trials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
