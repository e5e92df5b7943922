#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "aslam/evaluation.hpp"

using namespace aslam;

namespace {

EpisodeRecord terminal_record(double msee, double effort) {
  EpisodeRecord r;
  r.msee = {msee + 1.0, msee};
  r.effort = {0.0, effort};
  return r;
}

struct Fixture {
  KnownPoseProblem problem = make_three_map_instance();
  SimplexGrid grid{3, 4};
  BeliefTransition eta = build_known_pose_transition(grid, problem.likelihood(), problem.poses().size());
  PlannedPolicy rao = solve_policy(problem, grid, eta, ExplorationKind::rao, 200.0, {});
  PlannedPolicy shannon = solve_policy(problem, grid, eta, ExplorationKind::shannon, 200.0, {});
  std::vector<double> b0 = std::vector<double>(3, 1.0 / 3.0);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

}  // namespace

TEST(Statistics, QuantileAndCvarOnOneToTen) {
  std::vector<double> x(10);
  std::iota(x.begin(), x.end(), 1.0);
  EXPECT_EQ(empirical_quantile(x, 0.95), 10.0);
  EXPECT_EQ(empirical_quantile(x, 0.90), 9.0);
  EXPECT_EQ(empirical_quantile(x, 0.5), 5.0);
  EXPECT_DOUBLE_EQ(conditional_value_at_risk(x, 0.90), 10.0);
}

TEST(Statistics, ConstantSamples) {
  const std::vector<double> x(37, 2.5);
  EXPECT_EQ(empirical_quantile(x, 0.9), 2.5);
  EXPECT_DOUBLE_EQ(conditional_value_at_risk(x, 0.9), 2.5);
  EXPECT_DOUBLE_EQ(order_free_mean(x), 2.5);
}

TEST(Statistics, CvarDominatesQuantileAndIgnoresOrder) {
  std::mt19937_64 gen(9);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> x(1001);
  for (auto& v : x) v = e(gen);
  const double q = empirical_quantile(x, 0.9), c = conditional_value_at_risk(x, 0.9), m = order_free_mean(x);
  EXPECT_GE(c, q);
  EXPECT_GE(c, m);
  std::shuffle(x.begin(), x.end(), gen);
  EXPECT_EQ(empirical_quantile(x, 0.9), q);
  EXPECT_EQ(conditional_value_at_risk(x, 0.9), c);
  EXPECT_EQ(order_free_mean(x), m);
}

TEST(Statistics, TerminalStatsNeedTwentyRecords) {
  std::vector<EpisodeRecord> rs;
  for (int i = 0; i < 19; ++i) rs.push_back(terminal_record(i, 1.0));
  EXPECT_THROW(terminal_stats(rs), std::invalid_argument);
  rs.push_back(terminal_record(19, 1.0));
  const auto s = terminal_stats(rs);
  EXPECT_EQ(s.trials, 20u);
  EXPECT_DOUBLE_EQ(s.terminal_mean, 9.5);
  EXPECT_EQ(s.q95, 18.0);
  EXPECT_EQ(s.q90, 17.0);
  EXPECT_DOUBLE_EQ(s.cvar90, 18.5);
  EXPECT_DOUBLE_EQ(s.terminal_effort, 1.0);
  EXPECT_DOUBLE_EQ(s.mean_msee[0], 10.5);
}

TEST(Episode, RecordShapeAndInvariants) {
  const auto& f = fixture();
  const auto rule = tabulated_rule(f.rao.policy, f.problem, f.grid);
  for (auto mode : {SimulationMode::continuous, SimulationMode::quantized}) {
    EpisodeOptions o;
    o.horizon = 12;
    o.mode = mode;
    const auto r = simulate_episode(f.problem, f.grid, rule, 1, f.b0, 3, 4, o);
    ASSERT_EQ(r.pose.size(), 13u);
    ASSERT_EQ(r.msee.size(), 13u);
    ASSERT_EQ(r.effort.size(), 13u);
    ASSERT_EQ(r.action.size(), 13u);
    EXPECT_EQ(r.action.back(), -1);
    EXPECT_EQ(r.observation.front(), -1);
    EXPECT_TRUE(std::is_sorted(r.effort.begin(), r.effort.end()));
    const double diam = f.problem.map_space().distances().diameter();
    for (double e : r.msee) {
      EXPECT_GE(e, 0.0);
      EXPECT_LE(e, diam * diam + 1e-12);
    }
    for (std::size_t t = 0; t < 12; ++t) {
      const double u2 = f.problem.actions()[static_cast<std::size_t>(r.action[t])].squared_norm();
      EXPECT_NEAR(r.effort[t] - (t ? r.effort[t - 1] : 0.0), u2, 1e-12);
    }
    EXPECT_EQ(r.effort[12], r.effort[11]);
  }
}

TEST(Episode, DiracPriorHasZeroError) {
  const auto& f = fixture();
  const std::vector<double> dirac{0.0, 0.0, 1.0};
  const auto r = simulate_episode(f.problem, f.grid, tabulated_rule(f.rao.policy, f.problem, f.grid), 2, dirac, 1, 0, {});
  for (double e : r.msee) EXPECT_EQ(e, 0.0);
}

TEST(Episode, ReplayAndCommonRandomNumbers) {
  const auto& f = fixture();
  const auto rao = tabulated_rule(f.rao.policy, f.problem, f.grid);
  const auto shannon = tabulated_rule(f.shannon.policy, f.problem, f.grid);
  const auto random = random_baseline_rule(f.problem.actions().size());
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto a = simulate_episode(f.problem, f.grid, rao, k % 3, f.b0, 11, k, {});
    const auto b = simulate_episode(f.problem, f.grid, rao, k % 3, f.b0, 11, k, {});
    EXPECT_EQ(a.msee, b.msee);
    EXPECT_EQ(a.action, b.action);
    EXPECT_EQ(a.draw_hash, b.draw_hash);
    EXPECT_EQ(simulate_episode(f.problem, f.grid, shannon, k % 3, f.b0, 11, k, {}).draw_hash, a.draw_hash);
    EXPECT_EQ(simulate_episode(f.problem, f.grid, random, k % 3, f.b0, 11, k, {}).draw_hash, a.draw_hash);
  }
  EXPECT_NE(simulate_episode(f.problem, f.grid, rao, 0, f.b0, 12, 0, {}).draw_hash,
            simulate_episode(f.problem, f.grid, rao, 0, f.b0, 11, 0, {}).draw_hash);
}

TEST(Episode, SerialAndParallelTrialsMatch) {
  const auto& f = fixture();
  const auto rule = tabulated_rule(f.rao.policy, f.problem, f.grid);
  const auto s = run_trials(f.problem, f.grid, rule, f.b0, 60, 5, {}, Exec::serial);
  const auto p = run_trials(f.problem, f.grid, rule, f.b0, 60, 5, {}, Exec::parallel);
  ASSERT_EQ(s.size(), p.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    EXPECT_EQ(s[k].true_map, k % 3);
    EXPECT_EQ(s[k].msee, p[k].msee);
    EXPECT_EQ(s[k].effort, p[k].effort);
    EXPECT_EQ(s[k].belief_index, p[k].belief_index);
  }
  const auto a = terminal_stats(s), b = terminal_stats(p);
  EXPECT_EQ(a.cvar90, b.cvar90);
  EXPECT_EQ(a.mean_msee, b.mean_msee);
}

TEST(RandomBaseline, UniformOverTheNet) {
  const std::size_t A = 13;
  const auto rule = random_baseline_rule(A);
  std::vector<double> counts(A, 0.0);
  RandomStream r(4);
  const int n = 13000;
  const std::vector<double> b{1.0};
  for (int i = 0; i < n; ++i) {
    const auto a = rule(0, {0, 0}, 0, b, r.uniform());
    ASSERT_LT(a, A);
    counts[a] += 1;
  }
  const double p = 1.0 / A, sd = std::sqrt(n * p * (1 - p));
  for (double c : counts) EXPECT_NEAR(c, n * p, 4 * sd);
  EXPECT_EQ(rule(0, {0, 0}, 0, b, 0.0), 0u);
  EXPECT_EQ(rule(0, {0, 0}, 0, b, std::nextafter(1.0, 0.0)), A - 1);
  const auto& f = fixture();
  for (const auto& u : f.problem.actions()) EXPECT_LE(u.norm(), f.problem.config().motion.v_max + 1e-12);
}

TEST(PriorAveragedCost, DegeneratePriorGivesZero) {
  const auto& f = fixture();
  const std::vector<double> dirac{0.0, 1.0, 0.0};
  const auto r = prior_averaged_check(f.problem, f.grid, tabulated_rule(f.rao.policy, f.problem, f.grid), dirac, 50,
                                    20, 0.9, 3, Exec::serial);
  EXPECT_EQ(r.j_pa, 0.0);
  EXPECT_EQ(r.j_beta, 0.0);
  EXPECT_TRUE(r.passed);
}

TEST(PriorAveragedCost, AggregationOrderDoesNotMatter) {
  const auto& f = fixture();
  const auto r = prior_averaged_check(f.problem, f.grid, tabulated_rule(f.rao.policy, f.problem, f.grid), f.b0, 400,
                                    30, 0.9, 8);
  EXPECT_NEAR(r.j_pa, r.j_pa_by_time, 1e-9);
  EXPECT_NEAR(r.j_beta, r.j_beta_by_time, 1e-9);
  EXPECT_GT(r.j_beta, 0.0);
  EXPECT_GE(r.tail_bound, 0.0);
}

TEST(PolicyValue, OptimalBeatsRandomInTheModel) {
  const auto& f = fixture();
  const ExplorationCost rao(ExplorationKind::rao, f.problem.map_space().distances());
  SolveOptions o;
  o.beta = 0.9;
  const auto planned = solve_policy(f.problem, f.grid, f.eta, ExplorationKind::rao, 50.0, o);
  const auto opt = policy_value(f.problem, f.grid, tabulated_rule(planned.policy, f.problem, f.grid), rao, 50.0, 0.9,
                                f.b0, 2000, 60, 2);
  const auto rnd = policy_value(f.problem, f.grid, random_baseline_rule(f.problem.actions().size()), rao, 50.0, 0.9,
                                f.b0, 2000, 60, 2);
  EXPECT_LT(opt.mean, rnd.mean + 3 * std::hypot(opt.std_error, rnd.std_error));
  EXPECT_EQ(opt.samples.size(), 2000u);
}
