#ifndef ASLAM_PROBLEM_HPP
#define ASLAM_PROBLEM_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "aslam/belief.hpp"
#include "aslam/geometry.hpp"
#include "aslam/kernels.hpp"
#include "aslam/lattice.hpp"
#include "aslam/models.hpp"
#include "aslam/observation_partition.hpp"
#include "aslam/parallel.hpp"
#include "aslam/simplex_grid.hpp"

namespace aslam {

struct QuantizationConfig {
  std::size_t pose_n = 4;
  std::size_t map_n = 4;
  std::size_t obs_range_bins = 4;
  std::size_t obs_bearing_bins = 4;
  std::size_t action_n = 8;
  unsigned denominator = 5;  ///< M
  std::uint64_t grid_cap = kDefaultGridCap;
};

struct ProblemConfig {
  MotionConfig motion;
  SensorConfig sensor;
  QuantizationConfig quant;
  Vec2 start{-0.5, -0.5};
};

/// Finite known-pose model: pose lattice, map atoms, action net,
/// observation partition and the quantized kernels between them.
class KnownPoseProblem {
 public:
  /// Map atoms are the lattice of the landmark space W^l with `map_n`.
  KnownPoseProblem(const ProblemConfig& config, Exec exec = Exec::parallel);
  /// Explicit map atoms, each a list of landmark positions.
  KnownPoseProblem(const ProblemConfig& config, std::vector<std::vector<Vec2>> maps, Exec exec = Exec::parallel);

  [[nodiscard]] const ProblemConfig& config() const { return config_; }
  [[nodiscard]] const BoxLattice& poses() const { return poses_; }
  [[nodiscard]] const std::vector<std::vector<Vec2>>& maps() const { return maps_; }
  /// Map atoms as points of W^l with their distance matrix.
  [[nodiscard]] const FiniteSpace& map_space() const { return map_space_; }
  [[nodiscard]] const std::vector<Vec2>& actions() const { return actions_; }
  [[nodiscard]] const ObservationPartition& partition() const { return partition_; }
  /// (pose, action) -> pose.
  [[nodiscard]] const KernelMatrix& pose_kernel() const { return pose_kernel_; }
  /// (pose * maps + map) -> observation cell.
  [[nodiscard]] const KernelMatrix& likelihood() const { return likelihood_; }

  [[nodiscard]] std::size_t map_count() const { return maps_.size(); }

  /// Likelihood O_n(y | pose cell, m) for every map m.
  void likelihood_column(std::size_t pose, std::size_t y, std::span<double> out) const;

  /// Replaces the sensor noise and recomputes the observation kernel.
  void set_sensor_noise(double sigma_r, double sigma_phi, Exec exec = Exec::parallel);

 private:
  void build(Exec exec);

  ProblemConfig config_;
  BoxLattice poses_;
  std::vector<std::vector<Vec2>> maps_;
  FiniteSpace map_space_;
  std::vector<Vec2> actions_;
  ObservationPartition partition_;
  KernelMatrix pose_kernel_;
  KernelMatrix likelihood_;
};

/// Three landmark hypotheses on a 2x2 pose lattice with a coarse action net;
/// small enough to sweep M and run many Monte Carlo trials.
KnownPoseProblem make_three_map_instance(Exec exec = Exec::parallel);

}  // namespace aslam

#endif
