#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <random>

#include "aslam/belief.hpp"
#include "aslam/problem.hpp"
#include "oracles.hpp"

using namespace aslam;

namespace {

KernelMatrix random_kernel(std::mt19937_64& gen, std::size_t states, std::size_t inputs, std::size_t cols) {
  KernelMatrix k(states, inputs, cols);
  for (std::size_t r = 0; r < k.rows(); ++r) {
    const auto p = oracle::random_sparse_simplex(gen, cols);
    std::copy(p.begin(), p.end(), k.row(r).begin());
  }
  return k;
}

}  // namespace

TEST(Belief, ValidatesProbabilityVectors) {
  EXPECT_THROW(BeliefVector({0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(BeliefVector({1.5, -0.5}), std::invalid_argument);
  EXPECT_EQ(BeliefVector::dirac(3, 1)[1], 1.0);
  EXPECT_DOUBLE_EQ(BeliefVector::uniform(4)[2], 0.25);
}

// Bayes update against enumeration of the joint law of (s, s', y).
TEST(Belief, BayesUpdateMatchesJointEnumeration) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 4, actions = 3, obs = 4;
    const auto T = random_kernel(gen, n, actions, n);
    const auto O = random_kernel(gen, n, trial % 2 ? actions : 1, obs);
    const BeliefVector b(oracle::random_simplex(gen, n));
    for (std::size_t u = 0; u < actions; ++u) {
      std::vector<double> joint(n * obs, 0.0);
      for (std::size_t s = 0; s < n; ++s)
        for (std::size_t s2 = 0; s2 < n; ++s2)
          for (std::size_t y = 0; y < obs; ++y)
            joint[s2 * obs + y] += b[s] * T(s * actions + u, s2) * O(s2 * O.inputs() + (O.inputs() > 1 ? u : 0), y);
      const auto pred = predictive_observation(b, u, T, O);
      for (std::size_t y = 0; y < obs; ++y) {
        double py = 0.0;
        for (std::size_t s2 = 0; s2 < n; ++s2) py += joint[s2 * obs + y];
        EXPECT_NEAR(pred[y], py, 1e-14);
        if (py == 0.0) {
          EXPECT_THROW(bayes_update(b, u, y, T, O), ImpossibleObservation);
          continue;
        }
        const auto post = bayes_update(b, u, y, T, O);
        for (std::size_t s2 = 0; s2 < n; ++s2) EXPECT_NEAR(post[s2], joint[s2 * obs + y] / py, 1e-13);
      }
    }
  }
}

TEST(Belief, StaticUpdate) {
  const std::vector<double> b{0.5, 0.25, 0.25}, lik{0.0, 1.0, 0.5};
  std::vector<double> out(3);
  EXPECT_DOUBLE_EQ(static_update(b, lik, out), 0.375);
  EXPECT_DOUBLE_EQ(out[1], 2.0 / 3.0);
  std::vector<double> keep{9, 9, 9};
  EXPECT_EQ(static_update(b, std::vector<double>{0.0, 0.0, 0.0}, keep), 0.0);
  EXPECT_EQ(keep[0], 9.0);
}

// Known-pose belief transition against direct enumeration: each observation
// sends its predictive mass to the grid point nearest the exact posterior.
TEST(BeliefTransition, KnownPoseMatchesEnumeration) {
  const KnownPoseProblem problem = make_three_map_instance(Exec::serial);
  const SimplexGrid grid(3, 4);
  const auto eta = build_known_pose_transition(grid, problem.likelihood(), problem.poses().size(), Exec::serial);
  eta.check_stochastic();
  const std::size_t obs = problem.partition().size();
  for (std::size_t j = 0; j < problem.poses().size(); ++j)
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto b = grid.belief(i);
      std::map<std::uint32_t, double> expected;
      for (std::size_t y = 0; y < obs; ++y) {
        std::vector<double> post(3), lik(3);
        double py = 0.0;
        for (std::size_t m = 0; m < 3; ++m) {
          lik[m] = problem.likelihood()(j * 3 + m, y);
          py += b[m] * lik[m];
        }
        if (py <= 0.0) continue;
        for (std::size_t m = 0; m < 3; ++m) post[m] = b[m] * lik[m] / py;
        const auto k = oracle::nearest_grid_point(post, 4);
        const std::vector<Level> lv(k.begin(), k.end());
        expected[static_cast<std::uint32_t>(grid.index_of(lv))] += py;
      }
      const auto row = eta.row(i, j);
      ASSERT_EQ(row.size(), expected.size());
      for (const auto& e : row) EXPECT_NEAR(e.prob, expected[e.next], 1e-14);
    }
}

TEST(BeliefTransition, DiracBeliefsAreAbsorbing) {
  const KnownPoseProblem problem = make_three_map_instance(Exec::serial);
  const SimplexGrid grid(3, 4);
  const auto eta = build_known_pose_transition(grid, problem.likelihood(), problem.poses().size());
  for (std::size_t m = 0; m < 3; ++m) {
    std::vector<Level> lv(3, 0);
    lv[m] = 4;
    const auto i = grid.index_of(lv);
    for (std::size_t j = 0; j < problem.poses().size(); ++j) {
      const auto row = eta.row(i, j);
      ASSERT_EQ(row.size(), 1u);
      EXPECT_EQ(row[0].next, i);
      EXPECT_NEAR(row[0].prob, 1.0, 1e-12);
    }
  }
}

TEST(BeliefTransition, JointStateRowsAreStochasticAndParallelSafe) {
  std::mt19937_64 gen(32);
  const auto T = random_kernel(gen, 4, 3, 4);
  const auto O = random_kernel(gen, 4, 1, 5);
  const SimplexGrid grid(4, 3);
  const auto serial = build_belief_transition(grid, 3, T, O, Exec::serial);
  const auto parallel = build_belief_transition(grid, 3, T, O, Exec::parallel);
  serial.check_stochastic();
  ASSERT_EQ(serial.offsets(), parallel.offsets());
  for (std::size_t k = 0; k < serial.nonzeros(); ++k) {
    EXPECT_EQ(serial.entries()[k].next, parallel.entries()[k].next);
    EXPECT_EQ(serial.entries()[k].prob, parallel.entries()[k].prob);
  }
}

// Relabelling map atoms relabels the belief transition consistently.
TEST(BeliefTransition, EquivariantUnderAtomPermutation) {
  ProblemConfig cfg;
  cfg.quant.pose_n = 2;
  cfg.quant.action_n = 2;
  cfg.start = {-1, -1};
  const std::vector<std::vector<Vec2>> maps{{{-1, 1}}, {{1, 1}}, {{1, -1}}};
  const std::vector<std::vector<Vec2>> perm_maps{maps[2], maps[0], maps[1]};  // new k holds old perm[k]
  const std::vector<std::size_t> perm{2, 0, 1};
  const KnownPoseProblem a(cfg, maps), b(cfg, perm_maps);
  const SimplexGrid grid(3, 3);
  const auto ea = build_known_pose_transition(grid, a.likelihood(), a.poses().size());
  const auto eb = build_known_pose_transition(grid, b.likelihood(), b.poses().size());
  auto relabel = [&](std::size_t i) {
    const auto lv = grid.levels(i);
    std::vector<Level> out(3);
    for (std::size_t k = 0; k < 3; ++k) out[k] = lv[perm[k]];
    return grid.index_of(out);
  };
  for (std::size_t j = 0; j < a.poses().size(); ++j)
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::map<std::size_t, double> ra, rb;
      for (const auto& e : ea.row(i, j)) ra[relabel(e.next)] += e.prob;
      for (const auto& e : eb.row(relabel(i), j)) rb[e.next] += e.prob;
      bool same = ra.size() == rb.size();
      for (auto& [k, p] : ra) same = same && rb.count(k) && std::abs(p - rb[k]) < 1e-12;
      if (same) continue;
      // Only an exact nearest-point tie may break equivariance (lowest-index rule).
      bool tie = false;
      const auto bel = grid.belief(i);
      for (std::size_t y = 0; y < a.partition().size() && !tie; ++y) {
        std::vector<double> post(3);
        double py = 0.0;
        for (std::size_t m = 0; m < 3; ++m) py += bel[m] * a.likelihood()(j * 3 + m, y);
        if (py <= 0.0) continue;
        for (std::size_t m = 0; m < 3; ++m) post[m] = bel[m] * a.likelihood()(j * 3 + m, y) / py;
        const double best = oracle::sq_dist(post, oracle::nearest_grid_point(post, 3), 3);
        int at_best = 0;
        for (const auto& k : oracle::compositions(3, 3)) at_best += oracle::sq_dist(post, k, 3) < best + 1e-12;
        tie = at_best > 1;
      }
      EXPECT_TRUE(tie) << "pose " << j << " belief " << i;
    }
}
