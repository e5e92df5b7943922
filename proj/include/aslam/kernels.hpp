#ifndef ASLAM_KERNELS_HPP
#define ASLAM_KERNELS_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aslam/geometry.hpp"
#include "aslam/lattice.hpp"
#include "aslam/models.hpp"
#include "aslam/observation_partition.hpp"
#include "aslam/parallel.hpp"

namespace aslam {

/// Raised when a kernel row fails the stochasticity check.
class NonStochasticRow : public std::runtime_error {
 public:
  NonStochasticRow(std::size_t row, double sum)
      : std::runtime_error("kernel row " + std::to_string(row) + " sums to " + std::to_string(sum)),
        row_(row),
        sum_(sum) {}
  [[nodiscard]] std::size_t row() const { return row_; }
  [[nodiscard]] double sum() const { return sum_; }

 private:
  std::size_t row_;
  double sum_;
};

/// Row-stochastic table of conditional probabilities.
///
/// Rows are indexed by (state, input) as `state * inputs + input`; an
/// action-independent kernel has a single input.
class KernelMatrix {
 public:
  KernelMatrix() = default;
  KernelMatrix(std::size_t states, std::size_t inputs, std::size_t cols)
      : states_(states), inputs_(inputs), cols_(cols), p_(states * inputs * cols, 0.0) {}

  [[nodiscard]] std::size_t states() const { return states_; }
  [[nodiscard]] std::size_t inputs() const { return inputs_; }
  [[nodiscard]] std::size_t rows() const { return states_ * inputs_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  [[nodiscard]] std::size_t row_index(std::size_t state, std::size_t input) const { return state * inputs_ + input; }

  [[nodiscard]] std::span<double> row(std::size_t r) { return {p_.data() + r * cols_, cols_}; }
  [[nodiscard]] std::span<const double> row(std::size_t r) const { return {p_.data() + r * cols_, cols_}; }
  [[nodiscard]] std::span<const double> row(std::size_t state, std::size_t input) const {
    return row(row_index(state, input));
  }

  double& operator()(std::size_t r, std::size_t c) { return p_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return p_[r * cols_ + c]; }

  [[nodiscard]] const std::vector<double>& data() const { return p_; }
  [[nodiscard]] std::vector<double>& data() { return p_; }

  /// Throws NonStochasticRow for the first row with a negative entry or a
  /// sum off by more than `tol`.
  void check_stochastic(double tol = 1e-9) const;

 private:
  std::size_t states_ = 0;
  std::size_t inputs_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> p_;
};

/// Quantized pose kernel T_n(x_j | x_i, u) = T(B_j | x_i, u).
///
/// Cell masses are products of per-axis Gaussian interval masses around
/// x_i + u dt. The clamp sends mass beyond the workspace onto the boundary,
/// which lies in the outermost cells, so those cells absorb the tails.
/// Entries below `prune` are dropped and the row renormalized.
KernelMatrix quantized_transition(const MotionConfig& motion, const BoxLattice& poses, std::span<const Vec2> actions,
                                  Exec exec = Exec::parallel, double prune = 1e-13);

/// Joint kernel S_n((x', m') | (x, m), u) = T_n(x' | x, u) * [m' == m].
/// Joint state index is `pose * maps + map`.
KernelMatrix joint_transition(const KernelMatrix& pose_kernel, std::size_t maps);

/// Observation kernel O_n(y | x_j, m) = O(B_y | x_j, m) over joint states
/// (`pose * maps + map`); one input. `landmarks(m)` lists map m's landmarks.
KernelMatrix quantized_observation(const SensorConfig& sensor, const FiniteSpace& poses,
                                   const std::vector<std::vector<Vec2>>& maps, const ObservationPartition& partition,
                                   Exec exec = Exec::parallel);

}  // namespace aslam

#endif
