#ifndef ASLAM_BELIEF_HPP
#define ASLAM_BELIEF_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "aslam/kernels.hpp"
#include "aslam/parallel.hpp"
#include "aslam/simplex_grid.hpp"

namespace aslam {

/// Probability vector over the atoms of a finite space.
class BeliefVector {
 public:
  BeliefVector() = default;
  /// Throws std::invalid_argument on negative entries or a sum off by more than `tol`.
  explicit BeliefVector(std::vector<double> p, double tol = 1e-9);

  static BeliefVector dirac(std::size_t atoms, std::size_t at);
  static BeliefVector uniform(std::size_t atoms);

  [[nodiscard]] std::size_t size() const { return p_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return p_[i]; }
  [[nodiscard]] std::span<const double> values() const { return p_; }
  [[nodiscard]] const std::vector<double>& vector() const { return p_; }

 private:
  std::vector<double> p_;
};

/// Observation with zero likelihood under the predicted belief.
class ImpossibleObservation : public std::domain_error {
 public:
  explicit ImpossibleObservation(std::size_t observation)
      : std::domain_error("observation " + std::to_string(observation) + " has zero likelihood"),
        observation_(observation) {}
  [[nodiscard]] std::size_t observation() const { return observation_; }

 private:
  std::size_t observation_;
};

/// Predicted belief sum_s T(s' | s, u) b(s).
std::vector<double> predict(std::span<const double> b, std::size_t action, const KernelMatrix& transition);

/// b'(s') proportional to O(y | s', u) sum_s T(s' | s, u) b(s).
///
/// `observation` may have one input (action-independent) or as many inputs
/// as `transition`. Throws ImpossibleObservation when the normalizer is 0.
BeliefVector bayes_update(const BeliefVector& b, std::size_t action, std::size_t y, const KernelMatrix& transition,
                          const KernelMatrix& observation);

/// Posterior of a static hidden map given likelihood row entries
/// `likelihood[m]` = O(y | x, m). Writes into `out`; returns the normalizer
/// (0 means impossible, `out` untouched).
double static_update(std::span<const double> b, std::span<const double> likelihood, std::span<double> out);

/// G(y | b, u) = sum_s' O(y | s', u) sum_s T(s' | s, u) b(s).
std::vector<double> predictive_observation(const BeliefVector& b, std::size_t action, const KernelMatrix& transition,
                                           const KernelMatrix& observation);

/// One successor of a sparse belief-transition row.
struct GridTransition {
  std::uint32_t next;
  double prob;
};

/// Sparse kernel eta_n^(M)(b_j | b_i, input) on a simplex grid.
///
/// Row `input * grid_size + i`; entries sorted by next index, duplicates
/// merged. For the joint-state path the input is the action; in known-pose
/// mode it is the pose cell at which the observation is taken.
class BeliefTransition {
 public:
  BeliefTransition() = default;
  BeliefTransition(std::size_t grid_size, std::size_t inputs, std::vector<std::uint64_t> offsets,
                   std::vector<GridTransition> entries);

  [[nodiscard]] std::size_t grid_size() const { return grid_size_; }
  [[nodiscard]] std::size_t inputs() const { return inputs_; }
  [[nodiscard]] std::size_t rows() const { return grid_size_ * inputs_; }
  [[nodiscard]] std::size_t nonzeros() const { return entries_.size(); }

  [[nodiscard]] std::span<const GridTransition> row(std::size_t grid_index, std::size_t input) const {
    const std::size_t r = input * grid_size_ + grid_index;
    return {entries_.data() + offsets_[r], entries_.data() + offsets_[r + 1]};
  }

  [[nodiscard]] const std::vector<std::uint64_t>& offsets() const { return offsets_; }
  [[nodiscard]] const std::vector<GridTransition>& entries() const { return entries_; }

  /// Throws NonStochasticRow if some row misses 1 by more than `tol`.
  void check_stochastic(double tol = 1e-8) const;

 private:
  std::size_t grid_size_ = 0;
  std::size_t inputs_ = 0;
  std::vector<std::uint64_t> offsets_;
  std::vector<GridTransition> entries_;
};

/// Joint-state belief transition: for every grid belief and action, push
/// each observation's posterior to the grid with reznik_quantize and
/// accumulate its predictive mass.
BeliefTransition build_belief_transition(const SimplexGrid& grid, std::size_t actions, const KernelMatrix& transition,
                                         const KernelMatrix& observation, Exec exec = Exec::parallel);

/// Known-pose belief transition over map atoms: the map is static, so
/// the prediction is the identity and only the observation taken at pose
/// cell j matters. `likelihood` is quantized_observation over (pose, map).
BeliefTransition build_known_pose_transition(const SimplexGrid& grid, const KernelMatrix& likelihood,
                                             std::size_t poses, Exec exec = Exec::parallel);

}  // namespace aslam

#endif
