#include "aslam/problem.hpp"

#include <stdexcept>

namespace aslam {

namespace {

std::vector<std::vector<Vec2>> lattice_maps(const ProblemConfig& config) {
  const auto l = static_cast<std::size_t>(config.sensor.n_landmarks);
  const BoxLattice lattice = build_state_lattice(Box::square(config.motion.half_width, l), config.quant.map_n);
  std::vector<std::vector<Vec2>> maps;
  for (const auto& p : lattice.space().points()) {
    std::vector<Vec2> landmarks;
    for (std::size_t i = 0; i < l; ++i) {
      landmarks.push_back({p[2 * i], p[2 * i + 1]});
    }
    maps.push_back(std::move(landmarks));
  }
  return maps;
}

FiniteSpace map_points(const std::vector<std::vector<Vec2>>& maps) {
  std::vector<std::vector<double>> points;
  for (const auto& m : maps) {
    std::vector<double> p;
    for (const Vec2& v : m) {
      p.push_back(v.x);
      p.push_back(v.y);
    }
    points.push_back(std::move(p));
  }
  return FiniteSpace(std::move(points));
}

}  // namespace

KnownPoseProblem::KnownPoseProblem(const ProblemConfig& config, Exec exec)
    : KnownPoseProblem(config, lattice_maps(config), exec) {}

KnownPoseProblem::KnownPoseProblem(const ProblemConfig& config, std::vector<std::vector<Vec2>> maps, Exec exec)
    : config_(config),
      poses_(build_state_lattice(Box::square(config.motion.half_width), config.quant.pose_n)),
      maps_(std::move(maps)),
      map_space_(map_points(maps_)),
      actions_(build_action_net(config.motion.v_max, config.quant.action_n)),
      partition_(config.sensor, config.quant.obs_range_bins, config.quant.obs_bearing_bins) {
  config_.motion.validate();
  config_.sensor.validate();
  if (maps_.size() < 2) {
    throw std::invalid_argument("KnownPoseProblem: need at least two map hypotheses");
  }
  if (!poses_.locate(config_.start)) {
    throw std::invalid_argument("KnownPoseProblem: start pose outside the workspace");
  }
  build(exec);
}

void KnownPoseProblem::build(Exec exec) {
  pose_kernel_ = quantized_transition(config_.motion, poses_, actions_, exec);
  likelihood_ = quantized_observation(config_.sensor, poses_.space(), maps_, partition_, exec);
}

void KnownPoseProblem::likelihood_column(std::size_t pose, std::size_t y, std::span<double> out) const {
  for (std::size_t m = 0; m < maps_.size(); ++m) {
    out[m] = likelihood_(pose * maps_.size() + m, y);
  }
}

void KnownPoseProblem::set_sensor_noise(double sigma_r, double sigma_phi, Exec exec) {
  config_.sensor.sigma_r = sigma_r;
  config_.sensor.sigma_phi = sigma_phi;
  config_.sensor.validate();
  likelihood_ = quantized_observation(config_.sensor, poses_.space(), maps_, partition_, exec);
}

KnownPoseProblem make_three_map_instance(Exec exec) {
  ProblemConfig config;
  config.quant.pose_n = 2;
  config.quant.action_n = 2;
  config.quant.denominator = 4;
  config.sensor.sigma_r = 0.5;
  config.sensor.sigma_phi = 0.3;
  config.start = {-1.0, -1.0};
  std::vector<std::vector<Vec2>> maps{{{-1.0, 1.0}}, {{1.0, 1.0}}, {{1.0, -1.0}}};
  return KnownPoseProblem(config, std::move(maps), exec);
}

}  // namespace aslam
