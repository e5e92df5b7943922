#include "aslam/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aslam {

void KernelMatrix::check_stochastic(double tol) const {
  for (std::size_t r = 0; r < rows(); ++r) {
    double sum = 0.0;
    for (double v : row(r)) {
      if (!(v >= 0.0)) {
        throw NonStochasticRow(r, v);
      }
      sum += v;
    }
    if (!(std::abs(sum - 1.0) <= tol)) {
      throw NonStochasticRow(r, sum);
    }
  }
}

namespace {

// Mass of each cell along one axis for N(mean, sigma^2) after clamping.
std::vector<double> axis_masses(const std::vector<double>& edges, double mean, double sigma) {
  const std::size_t cells = edges.size() - 1;
  std::vector<double> mass(cells, 0.0);
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (sigma == 0.0) {
    // Degenerate law: the clamped mean sits in exactly one cell.
    const double x = std::clamp(mean, edges.front(), edges.back());
    std::size_t j = 0;
    while (j + 1 < cells && x >= edges[j + 1]) ++j;
    mass[j] = 1.0;
    return mass;
  }
  for (std::size_t j = 0; j < cells; ++j) {
    const double lo = j == 0 ? -inf : (edges[j] - mean) / sigma;
    const double hi = j + 1 == cells ? inf : (edges[j + 1] - mean) / sigma;
    mass[j] = normal_interval_mass(lo, hi);
  }
  return mass;
}

void fill_transition_row(const MotionConfig& motion, const BoxLattice& poses, std::span<const Vec2> actions,
                         const std::vector<std::vector<double>>& edges, KernelMatrix& kernel, std::size_t r,
                         double prune) {
  const std::size_t pose = r / actions.size();
  const std::size_t action = r % actions.size();
  const Vec2 mean = poses.space().planar(pose) + motion.dt * actions[action];
  const auto mx = axis_masses(edges[0], mean.x, motion.sigma_w);
  const auto my = axis_masses(edges[1], mean.y, motion.sigma_w);
  auto row = kernel.row(r);
  double sum = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    const double p = mx[j % mx.size()] * my[j / mx.size()];
    row[j] = p < prune ? 0.0 : p;
    sum += row[j];
  }
  for (double& p : row) p /= sum;
}

}  // namespace

KernelMatrix quantized_transition(const MotionConfig& motion, const BoxLattice& poses, std::span<const Vec2> actions,
                                  Exec exec, double prune) {
  motion.validate();
  if (poses.workspace().dim() != 2) {
    throw std::invalid_argument("quantized_transition: pose lattice must be planar");
  }
  const std::vector<std::vector<double>> edges{poses.edges(0), poses.edges(1)};
  KernelMatrix kernel(poses.size(), actions.size(), poses.size());
  const auto rows = static_cast<long>(kernel.rows());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long r = 0; r < rows; ++r) {
      fill_transition_row(motion, poses, actions, edges, kernel, static_cast<std::size_t>(r), prune);
    }
  } else {
    for (long r = 0; r < rows; ++r) {
      fill_transition_row(motion, poses, actions, edges, kernel, static_cast<std::size_t>(r), prune);
    }
  }
  return kernel;
}

KernelMatrix joint_transition(const KernelMatrix& pose_kernel, std::size_t maps) {
  const std::size_t poses = pose_kernel.states();
  const std::size_t inputs = pose_kernel.inputs();
  KernelMatrix joint(poses * maps, inputs, poses * maps);
  for (std::size_t x = 0; x < poses; ++x) {
    for (std::size_t m = 0; m < maps; ++m) {
      for (std::size_t u = 0; u < inputs; ++u) {
        const auto src = pose_kernel.row(x, u);
        auto dst = joint.row(joint.row_index(x * maps + m, u));
        for (std::size_t xn = 0; xn < poses; ++xn) {
          dst[xn * maps + m] = src[xn];
        }
      }
    }
  }
  return joint;
}

namespace {

void fill_observation_row(const SensorConfig& sensor, const FiniteSpace& poses,
                          const std::vector<std::vector<Vec2>>& maps, const ObservationPartition& partition,
                          KernelMatrix& kernel, std::size_t r) {
  const std::size_t pose = r / maps.size();
  const auto& landmarks = maps[r % maps.size()];
  const Vec2 x = poses.planar(pose);
  // Per-landmark cell masses, then the product over the mixed-radix digits.
  std::vector<std::vector<double>> per(landmarks.size(), std::vector<double>(partition.reading_cells()));
  for (std::size_t i = 0; i < landmarks.size(); ++i) {
    for (std::size_t k = 0; k < partition.reading_cells(); ++k) {
      per[i][k] = reading_cell_prob(sensor, x, landmarks[i], partition.reading_cell(k));
    }
  }
  auto row = kernel.row(r);
  for (std::size_t y = 0; y < row.size(); ++y) {
    double p = 1.0;
    std::size_t rest = y;
    for (std::size_t i = 0; i < landmarks.size(); ++i) {
      p *= per[i][rest % partition.reading_cells()];
      rest /= partition.reading_cells();
    }
    row[y] = p;
  }
}

}  // namespace

KernelMatrix quantized_observation(const SensorConfig& sensor, const FiniteSpace& poses,
                                   const std::vector<std::vector<Vec2>>& maps, const ObservationPartition& partition,
                                   Exec exec) {
  sensor.validate();
  for (const auto& m : maps) {
    if (m.size() != partition.landmarks()) {
      throw std::invalid_argument("quantized_observation: map landmark count differs from the partition");
    }
  }
  KernelMatrix kernel(poses.size() * maps.size(), 1, partition.size());
  const auto rows = static_cast<long>(kernel.rows());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long r = 0; r < rows; ++r) {
      fill_observation_row(sensor, poses, maps, partition, kernel, static_cast<std::size_t>(r));
    }
  } else {
    for (long r = 0; r < rows; ++r) {
      fill_observation_row(sensor, poses, maps, partition, kernel, static_cast<std::size_t>(r));
    }
  }
  return kernel;
}

}  // namespace aslam
