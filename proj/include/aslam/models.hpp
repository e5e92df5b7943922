#ifndef ASLAM_MODELS_HPP
#define ASLAM_MODELS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "aslam/geometry.hpp"

/**
 * \file
 * \brief Continuous motion and range-bearing sensor models.
 *
 * The robot is a single integrator on the square workspace [-L, L]^2 with
 * Gaussian process noise and a component-wise clamp back into the
 * workspace. Each landmark is detected with a range-dependent probability
 * that vanishes in the near-field blind zone and beyond the sensing horizon;
 * detected readings carry truncated-Gaussian range noise and wrapped-normal
 * bearing noise.
 */

namespace aslam {

struct MotionConfig {
  double half_width = 2.0;  ///< L
  double dt = 1.0;
  double v_max = 1.0;
  double sigma_w = 0.1;

  /// Throws std::invalid_argument on L <= 0, dt <= 0, v_max <= 0 or sigma_w < 0.
  void validate() const;
};

struct SensorConfig {
  double eps = 0.1;    ///< minimum range
  double r0 = 0.5;     ///< start of full detection
  double r1 = 2.5;     ///< end of full detection
  double r_max = 4.0;  ///< sensing horizon
  double sigma_r = 0.75;
  double sigma_phi = 0.5;
  int n_landmarks = 1;

  /// Requires 0 < eps < r0 < r1 < r_max, positive noise and at least one landmark.
  void validate() const;
};

/// A detected range-bearing pair; bearing in [-pi, pi) from the +x axis.
struct RangeBearing {
  double range = 0.0;
  double bearing = 0.0;
};

/// One entry per landmark; std::nullopt is the null (missed detection) symbol.
using Observation = std::vector<std::optional<RangeBearing>>;

/// Measurable cell of a single landmark's reading space.
struct ReadingCell {
  bool null = false;
  double range_lo = 0.0;
  double range_hi = 0.0;
  double bearing_lo = 0.0;
  double bearing_hi = 0.0;
};

/// Product cell over all landmarks.
using ObservationCell = std::vector<ReadingCell>;

/// Clamps each coordinate to [-L, L].
Vec2 project_to_workspace(const MotionConfig& cfg, Vec2 x);

/// P_X(x + u dt + sigma_w * z) for standard-normal `z`.
///
/// Throws std::invalid_argument when |u| > v_max.
Vec2 step_pose(const MotionConfig& cfg, Vec2 x, Vec2 u, Vec2 standard_normal);

/// h(z) = 3z^2 - 2z^3, clamped to [0, 1] outside the unit interval.
double smoothstep(double z);

/// 0 below a, h((r-a)/(b-a)) in between, 1 above b.
double smooth_ramp(double r, double a, double b);

/// Detection probability as a function of the true range.
double detection_prob(const SensorConfig& cfg, double range);

/// Standard normal CDF.
double normal_cdf(double z);

/// Standard normal mass of [lo, hi], accurate in both tails.
double normal_interval_mass(double lo, double hi);

/// CDF of N(mu, sigma^2) truncated to [lo, hi]; exactly 0 at lo and 1 at hi.
double truncated_normal_cdf(double x, double mu, double sigma, double lo, double hi);

/// Inverse of truncated_normal_cdf for p in [0, 1].
double truncated_normal_quantile(double p, double mu, double sigma, double lo, double hi);

/// Mass of the arc [lo, hi) under a normal wrapped onto [-pi, pi).
double wrapped_normal_arc_mass(double lo, double hi, double mu, double sigma);

/// True range and bearing from `x` to `landmark`.
RangeBearing true_reading(Vec2 x, Vec2 landmark);

/// Random inputs consumed by one landmark reading. The sensor always
/// consumes all three, so two runs sharing draws stay paired.
struct ReadingDraws {
  double detect_uniform = 0.0;
  double range_uniform = 0.0;
  double bearing_normal = 0.0;
};

/// Samples one landmark reading from pre-drawn randomness.
std::optional<RangeBearing> sample_reading(const SensorConfig& cfg, Vec2 x, Vec2 landmark, const ReadingDraws& draws);

/// Samples an observation; `draws` holds one entry per landmark.
Observation sample_observation(const SensorConfig& cfg, Vec2 x, std::span<const Vec2> landmarks,
                               std::span<const ReadingDraws> draws);

/// Probability of a single landmark's reading cell.
double reading_cell_prob(const SensorConfig& cfg, Vec2 x, Vec2 landmark, const ReadingCell& cell);

/// Probability of a product cell; landmarks are conditionally independent.
double observation_cell_prob(const SensorConfig& cfg, Vec2 x, std::span<const Vec2> landmarks,
                             const ObservationCell& cell);

}  // namespace aslam

#endif
