#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "aslam/models.hpp"
#include "aslam/observation_partition.hpp"
#include "aslam/rng.hpp"

using namespace aslam;

TEST(Motion, StepClampsToWorkspace) {
  MotionConfig cfg;
  EXPECT_EQ(step_pose(cfg, {1.8, -1.8}, {1.0, -0.0}, {0.0, 0.0}), (Vec2{2.0, -1.8}));
  EXPECT_EQ(step_pose(cfg, {0.0, 0.0}, {0.5, 0.5}, {10.0, -100.0}), (Vec2{1.5, -2.0}));
  EXPECT_THROW(step_pose(cfg, {0.0, 0.0}, {1.0, 0.1}, {0.0, 0.0}), std::invalid_argument);
}

TEST(Motion, ValidateRejectsBadParameters) {
  MotionConfig cfg;
  cfg.dt = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  SensorConfig s;
  s.r0 = 3.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = SensorConfig{};
  s.sigma_phi = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Sensor, SmoothstepShape) {
  EXPECT_EQ(smoothstep(-1.0), 0.0);
  EXPECT_EQ(smoothstep(2.0), 1.0);
  EXPECT_DOUBLE_EQ(smoothstep(0.5), 0.5);
  EXPECT_DOUBLE_EQ(smoothstep(0.25), 3 * 0.0625 - 2 * 0.015625);
  for (double z = 0.0; z < 1.0; z += 0.01) EXPECT_LE(smoothstep(z), smoothstep(z + 0.01));
}

TEST(Sensor, DetectionZones) {
  SensorConfig s;
  EXPECT_EQ(detection_prob(s, 0.05), 0.0);
  EXPECT_EQ(detection_prob(s, s.eps), 0.0);
  EXPECT_EQ(detection_prob(s, 1.0), 1.0);
  EXPECT_EQ(detection_prob(s, s.r1), 1.0);
  EXPECT_EQ(detection_prob(s, s.r_max), 0.0);
  EXPECT_EQ(detection_prob(s, 10.0), 0.0);
  EXPECT_NEAR(detection_prob(s, (s.r1 + s.r_max) / 2), 0.5, 1e-15);
}

TEST(Sensor, TruncatedNormalQuantileInvertsCdf) {
  for (double mu : {-1.0, 0.3, 2.0, 6.0})
    for (double p : {1e-6, 0.1, 0.5, 0.9, 1 - 1e-9}) {
      const double x = truncated_normal_quantile(p, mu, 0.75, 0.1, 4.0);
      EXPECT_GE(x, 0.1);
      EXPECT_LE(x, 4.0);
      EXPECT_NEAR(truncated_normal_cdf(x, mu, 0.75, 0.1, 4.0), p, 1e-9);
    }
  EXPECT_EQ(truncated_normal_cdf(0.1, 1.0, 1.0, 0.1, 4.0), 0.0);
  EXPECT_EQ(truncated_normal_cdf(4.0, 1.0, 1.0, 0.1, 4.0), 1.0);
}

TEST(Sensor, WrappedArcsPartitionTheCircle) {
  for (double sigma : {0.05, 0.5, 3.0, 20.0})
    for (double mu : {-3.0, 0.0, 3.1, 7.0}) {
      double total = 0.0;
      const int arcs = 7;
      for (int k = 0; k < arcs; ++k) {
        const double lo = -std::numbers::pi + 2 * std::numbers::pi * k / arcs;
        total += wrapped_normal_arc_mass(lo, lo + 2 * std::numbers::pi / arcs, mu, sigma);
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  // large sigma tends to the uniform law on the circle
  EXPECT_NEAR(wrapped_normal_arc_mass(0.0, std::numbers::pi / 2, 0.3, 50.0), 0.25, 1e-9);
}

// Monte Carlo oracle: sampled readings fall in each cell with the analytic
// probability, within 4 binomial standard deviations.
TEST(Sensor, SampledReadingsMatchCellProbabilities) {
  SensorConfig s;
  const ObservationPartition part(s, 4, 4);
  const Vec2 x{-0.5, -0.5};
  for (Vec2 lm : {Vec2{0.5, 0.5}, Vec2{-0.4, -0.45}, Vec2{1.5, -1.5}, Vec2{1.8, 1.8}}) {
    const int n = 40000;
    std::vector<int> counts(part.reading_cells(), 0);
    RandomStream rs(99);
    for (int i = 0; i < n; ++i) {
      ReadingDraws d{rs.uniform(), rs.uniform(), rs.normal()};
      ++counts[part.locate_reading(sample_reading(s, x, lm, d))];
    }
    double total = 0.0;
    for (std::size_t k = 0; k < part.reading_cells(); ++k) {
      const double p = reading_cell_prob(s, x, lm, part.reading_cell(k));
      total += p;
      const double sd = std::sqrt(n * p * (1 - p)) + 1.0;
      EXPECT_NEAR(counts[k], n * p, 4 * sd) << "cell " << k;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Sensor, ObservationIsProductOverLandmarks) {
  SensorConfig s;
  s.n_landmarks = 2;
  const ObservationPartition part(s, 3, 3);
  const Vec2 x{0.0, 0.0};
  const std::vector<Vec2> lms{{1.0, 0.5}, {-1.5, 0.2}};
  double total = 0.0;
  for (std::size_t y = 0; y < part.size(); ++y) {
    const auto dg = part.digits(y);
    const double p = observation_cell_prob(s, x, lms, part.cell(y));
    EXPECT_NEAR(p, reading_cell_prob(s, x, lms[0], part.reading_cell(dg[0])) *
                       reading_cell_prob(s, x, lms[1], part.reading_cell(dg[1])),
                1e-15);
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Sensor, OutOfRangeLandmarkIsNeverSeen) {
  SensorConfig s;
  const ObservationPartition part(s, 4, 4);
  ReadingDraws d{0.0, 0.5, 0.0};
  EXPECT_FALSE(sample_reading(s, {0.0, 0.0}, {5.0, 0.0}, d).has_value());
  EXPECT_FALSE(sample_reading(s, {0.0, 0.0}, {0.01, 0.0}, d).has_value());
  EXPECT_EQ(reading_cell_prob(s, {0.0, 0.0}, {5.0, 0.0}, part.reading_cell(part.null_reading())), 1.0);
}
