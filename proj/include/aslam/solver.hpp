#ifndef ASLAM_SOLVER_HPP
#define ASLAM_SOLVER_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "aslam/belief.hpp"
#include "aslam/costs.hpp"
#include "aslam/kernels.hpp"
#include "aslam/lattice.hpp"
#include "aslam/parallel.hpp"
#include "aslam/simplex_grid.hpp"

namespace aslam {

struct SolveOptions {
  double beta = 0.95;
  double tol = 1e-6;
  int max_iter = 10'000;
  Exec exec = Exec::parallel;
};

/// Output of value iteration.
struct Solution {
  std::vector<double> value;
  std::vector<std::uint32_t> policy;
  /// Sup-norm change |V_k - V_{k-1}| of every sweep.
  std::vector<double> residuals;
  /// |T V - V| at the returned value function.
  double bellman_residual = 0.0;
  bool converged = false;
};

/// Dense stage cost c(state, action), row-major by state.
struct CostTable {
  std::size_t states = 0;
  std::size_t actions = 0;
  std::vector<double> cost;

  [[nodiscard]] double operator()(std::size_t s, std::size_t a) const { return cost[s * actions + a]; }
};

/// Value iteration on a finite MDP whose rows are `transition.row(state, action)`.
///
/// Synchronous (Jacobi) sweeps V_{k+1}(x) = min_u [c(x,u) + beta sum p V_k];
/// stops once the sweep change drops below tol (1 - beta) / (2 beta). The
/// greedy policy breaks ties toward the lowest action index. Throws
/// NonStochasticRow before iterating if a row is not a distribution.
Solution value_iteration(const BeliefTransition& transition, const CostTable& costs, const SolveOptions& options);

/// Separable stage cost lambda * rho_bar(b_i) + |u|^2.
struct StageCostTable {
  std::vector<double> belief_term;
  std::vector<double> action_term;

  [[nodiscard]] double max_cost() const;
};

StageCostTable make_stage_costs(const SimplexGrid& grid, const ExplorationCost& exploration, double lambda,
                                std::span<const Vec2> actions, Exec exec = Exec::parallel);

/// Sparse copy of a pose kernel with zero entries dropped.
class SparsePoseKernel {
 public:
  explicit SparsePoseKernel(const KernelMatrix& kernel);

  struct Entry {
    std::uint32_t next;
    double prob;
  };

  [[nodiscard]] std::size_t poses() const { return poses_; }
  [[nodiscard]] std::size_t actions() const { return actions_; }
  [[nodiscard]] std::span<const Entry> row(std::size_t pose, std::size_t action) const {
    const std::size_t r = pose * actions_ + action;
    return {entries_.data() + offsets_[r], entries_.data() + offsets_[r + 1]};
  }

 private:
  std::size_t poses_, actions_;
  std::vector<std::size_t> offsets_;
  std::vector<Entry> entries_;
};

/// Value iteration on (pose cell, grid belief) states, index `pose * G + i`.
///
/// The successor of (j, b) under u is (j', b') with probability
/// T(j' | j, u) eta_{j'}(b' | b), where eta is the known-pose belief
/// transition (input = pose at which the next observation is taken).
Solution value_iteration_known_pose(const BeliefTransition& observation_update, const KernelMatrix& pose_kernel,
                                    const StageCostTable& costs, const SolveOptions& options);

/// Tabulated policy with the quantization it was solved on.
struct Policy {
  std::size_t poses = 0;
  std::size_t grid_size = 0;
  std::size_t atoms = 0;
  unsigned denominator = 0;
  std::size_t actions = 0;
  ExplorationKind kind = ExplorationKind::rao;
  double lambda = 0.0;
  double beta = 0.0;
  std::vector<std::uint32_t> table;

  [[nodiscard]] std::uint32_t action(std::size_t pose, std::size_t grid_index) const {
    return table[pose * grid_size + grid_index];
  }
};

/// Extends a grid policy to any pose and belief: quantize the pose to its
/// cell, the belief with reznik_quantize, and look the action up. Throws
/// std::invalid_argument if the pose is outside the workspace or the policy
/// does not match the lattice/grid.
std::uint32_t extend_policy(const Policy& policy, const BoxLattice& poses, const SimplexGrid& grid, Vec2 pose,
                            std::span<const double> belief);

/// Fraction of states where two policies choose the same action.
double policy_agreement(const Policy& a, const Policy& b);

}  // namespace aslam

#endif
