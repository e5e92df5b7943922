#include "aslam/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace aslam {

void MotionConfig::validate() const {
  if (!(half_width > 0.0) || !(dt > 0.0) || !(v_max > 0.0) || !(sigma_w >= 0.0)) {
    throw std::invalid_argument("MotionConfig: require L > 0, dt > 0, v_max > 0, sigma_w >= 0");
  }
}

void SensorConfig::validate() const {
  if (!(0.0 < eps && eps < r0 && r0 < r1 && r1 < r_max)) {
    throw std::invalid_argument("SensorConfig: require 0 < eps < r0 < r1 < r_max");
  }
  if (!(sigma_r > 0.0) || !(sigma_phi > 0.0)) {
    throw std::invalid_argument("SensorConfig: noise standard deviations must be positive");
  }
  if (n_landmarks < 1) {
    throw std::invalid_argument("SensorConfig: need at least one landmark");
  }
}

Vec2 project_to_workspace(const MotionConfig& cfg, Vec2 x) {
  const double L = cfg.half_width;
  return {std::clamp(x.x, -L, L), std::clamp(x.y, -L, L)};
}

Vec2 step_pose(const MotionConfig& cfg, Vec2 x, Vec2 u, Vec2 standard_normal) {
  // Small slack so that net points projected onto the disc boundary pass.
  if (u.norm() > cfg.v_max * (1.0 + 1e-12)) {
    throw std::invalid_argument("step_pose: control exceeds the speed bound");
  }
  return project_to_workspace(cfg, x + cfg.dt * u + cfg.sigma_w * standard_normal);
}

double smoothstep(double z) {
  z = std::clamp(z, 0.0, 1.0);
  return z * z * (3.0 - 2.0 * z);
}

double smooth_ramp(double r, double a, double b) {
  if (r <= a) return 0.0;
  if (r >= b) return 1.0;
  return smoothstep((r - a) / (b - a));
}

double detection_prob(const SensorConfig& cfg, double range) {
  return smooth_ramp(range, cfg.eps, cfg.r0) * (1.0 - smooth_ramp(range, cfg.r1, cfg.r_max));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_interval_mass(double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  if (lo > 0.0) {
    // Upper tail: difference of survival functions keeps precision.
    return 0.5 * (std::erfc(lo / std::numbers::sqrt2) - std::erfc(hi / std::numbers::sqrt2));
  }
  return normal_cdf(hi) - normal_cdf(lo);
}

double truncated_normal_cdf(double x, double mu, double sigma, double lo, double hi) {
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  const double a = (lo - mu) / sigma;
  const double b = (hi - mu) / sigma;
  const double z = normal_interval_mass(a, b);
  if (!(z > 0.0)) {
    // Entire mass numerically outside: fall back to the nearest endpoint.
    return mu <= lo ? 1.0 : 0.0;
  }
  return std::clamp(normal_interval_mass(a, (x - mu) / sigma) / z, 0.0, 1.0);
}

double truncated_normal_quantile(double p, double mu, double sigma, double lo, double hi) {
  if (p <= 0.0) return lo;
  if (p >= 1.0) return hi;
  namespace bm = boost::math;
  const bm::normal std_normal;
  const double a = (lo - mu) / sigma;
  const double b = (hi - mu) / sigma;
  double z = 0.0;
  if (a > 0.0) {
    const double sa = bm::cdf(bm::complement(std_normal, a));
    const double sb = bm::cdf(bm::complement(std_normal, b));
    const double s = sa - p * (sa - sb);
    if (!(s > 0.0)) return hi;
    if (s >= 1.0) return lo;
    z = bm::quantile(bm::complement(std_normal, s));
  } else {
    const double fa = bm::cdf(std_normal, a);
    const double fb = bm::cdf(std_normal, b);
    const double q = fa + p * (fb - fa);
    if (!(q > 0.0)) return lo;
    if (q >= 1.0) return hi;
    z = bm::quantile(std_normal, q);
  }
  return std::clamp(mu + sigma * z, lo, hi);
}

double wrapped_normal_arc_mass(double lo, double hi, double mu, double sigma) {
  if (!(hi > lo)) return 0.0;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  // Image count so that the omitted tail is far below 1e-12.
  const int images = 10 + static_cast<int>(std::ceil(10.0 * sigma / two_pi));
  const double centre = wrap_angle(mu);
  double mass = 0.0;
  for (int k = -images; k <= images; ++k) {
    const double shift = centre + two_pi * k;
    mass += normal_interval_mass((lo - shift) / sigma, (hi - shift) / sigma);
  }
  return mass;
}

RangeBearing true_reading(Vec2 x, Vec2 landmark) {
  const Vec2 delta = landmark - x;
  return {delta.norm(), wrap_angle(std::atan2(delta.y, delta.x))};
}

std::optional<RangeBearing> sample_reading(const SensorConfig& cfg, Vec2 x, Vec2 landmark, const ReadingDraws& draws) {
  const RangeBearing truth = true_reading(x, landmark);
  if (!(draws.detect_uniform < detection_prob(cfg, truth.range))) {
    return std::nullopt;
  }
  RangeBearing reading;
  reading.range = truncated_normal_quantile(draws.range_uniform, truth.range, cfg.sigma_r, cfg.eps, cfg.r_max);
  reading.bearing = wrap_angle(truth.bearing + cfg.sigma_phi * draws.bearing_normal);
  return reading;
}

Observation sample_observation(const SensorConfig& cfg, Vec2 x, std::span<const Vec2> landmarks,
                               std::span<const ReadingDraws> draws) {
  if (draws.size() != landmarks.size()) {
    throw std::invalid_argument("sample_observation: need one draw set per landmark");
  }
  Observation obs;
  obs.reserve(landmarks.size());
  for (std::size_t i = 0; i < landmarks.size(); ++i) {
    obs.push_back(sample_reading(cfg, x, landmarks[i], draws[i]));
  }
  return obs;
}

double reading_cell_prob(const SensorConfig& cfg, Vec2 x, Vec2 landmark, const ReadingCell& cell) {
  const RangeBearing truth = true_reading(x, landmark);
  const double p_det = detection_prob(cfg, truth.range);
  if (cell.null) {
    return 1.0 - p_det;
  }
  const double r_lo = std::max(cell.range_lo, cfg.eps);
  const double r_hi = std::min(cell.range_hi, cfg.r_max);
  // For truth.range <= eps the detected law is arbitrary and p_det = 0.
  if (!(r_hi > r_lo) || !(cell.bearing_hi > cell.bearing_lo) || p_det == 0.0) {
    return 0.0;
  }
  const double range_mass = truncated_normal_cdf(r_hi, truth.range, cfg.sigma_r, cfg.eps, cfg.r_max) -
                            truncated_normal_cdf(r_lo, truth.range, cfg.sigma_r, cfg.eps, cfg.r_max);
  const double bearing_mass = wrapped_normal_arc_mass(cell.bearing_lo, cell.bearing_hi, truth.bearing, cfg.sigma_phi);
  return p_det * range_mass * bearing_mass;
}

double observation_cell_prob(const SensorConfig& cfg, Vec2 x, std::span<const Vec2> landmarks,
                             const ObservationCell& cell) {
  if (cell.size() != landmarks.size()) {
    throw std::invalid_argument("observation_cell_prob: cell and landmark counts differ");
  }
  double p = 1.0;
  for (std::size_t i = 0; i < landmarks.size(); ++i) {
    p *= reading_cell_prob(cfg, x, landmarks[i], cell[i]);
  }
  return p;
}

}  // namespace aslam
