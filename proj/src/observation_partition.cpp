#include "aslam/observation_partition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aslam {

ObservationPartition::ObservationPartition(const SensorConfig& sensor, std::size_t range_bins, std::size_t bearing_bins)
    : eps_(sensor.eps),
      r_max_(sensor.r_max),
      range_bins_(range_bins),
      bearing_bins_(bearing_bins),
      landmarks_(static_cast<std::size_t>(sensor.n_landmarks)) {
  sensor.validate();
  if (range_bins == 0 || bearing_bins == 0) {
    throw std::invalid_argument("ObservationPartition: need at least one range bin and one arc");
  }
  size_ = 1;
  for (std::size_t i = 0; i < landmarks_; ++i) {
    size_ *= reading_cells();
  }
}

ReadingCell ObservationPartition::reading_cell(std::size_t k) const {
  if (k >= reading_cells()) {
    throw std::out_of_range("ObservationPartition: reading cell index");
  }
  if (k == null_reading()) {
    return ReadingCell{.null = true};
  }
  const std::size_t rb = k % range_bins_;
  const std::size_t ab = k / range_bins_;
  const double width = (r_max_ - eps_) / static_cast<double>(range_bins_);
  const double arc = 2.0 * std::numbers::pi / static_cast<double>(bearing_bins_);
  ReadingCell cell;
  cell.range_lo = eps_ + static_cast<double>(rb) * width;
  cell.range_hi = rb + 1 == range_bins_ ? r_max_ : eps_ + static_cast<double>(rb + 1) * width;
  cell.bearing_lo = -std::numbers::pi + static_cast<double>(ab) * arc;
  cell.bearing_hi = ab + 1 == bearing_bins_ ? std::numbers::pi : -std::numbers::pi + static_cast<double>(ab + 1) * arc;
  return cell;
}

std::vector<std::size_t> ObservationPartition::digits(std::size_t index) const {
  std::vector<std::size_t> out(landmarks_);
  for (std::size_t i = 0; i < landmarks_; ++i) {
    out[i] = index % reading_cells();
    index /= reading_cells();
  }
  return out;
}

ObservationCell ObservationPartition::cell(std::size_t index) const {
  ObservationCell cell;
  for (std::size_t k : digits(index)) {
    cell.push_back(reading_cell(k));
  }
  return cell;
}

Observation ObservationPartition::representative(std::size_t index) const {
  Observation obs;
  for (const ReadingCell& c : cell(index)) {
    if (c.null) {
      obs.emplace_back(std::nullopt);
    } else {
      obs.emplace_back(RangeBearing{0.5 * (c.range_lo + c.range_hi), 0.5 * (c.bearing_lo + c.bearing_hi)});
    }
  }
  return obs;
}

std::size_t ObservationPartition::locate_reading(const std::optional<RangeBearing>& reading) const {
  if (!reading) {
    return null_reading();
  }
  if (!(reading->range >= eps_ && reading->range <= r_max_) || !(reading->bearing >= -std::numbers::pi) ||
      !(reading->bearing < std::numbers::pi)) {
    throw std::invalid_argument("ObservationPartition: reading outside [eps, r_max] x [-pi, pi)");
  }
  const double width = (r_max_ - eps_) / static_cast<double>(range_bins_);
  const double arc = 2.0 * std::numbers::pi / static_cast<double>(bearing_bins_);
  auto rb = static_cast<std::size_t>(std::floor((reading->range - eps_) / width));
  auto ab = static_cast<std::size_t>(std::floor((reading->bearing + std::numbers::pi) / arc));
  rb = std::min(rb, range_bins_ - 1);
  ab = std::min(ab, bearing_bins_ - 1);
  return ab * range_bins_ + rb;
}

std::size_t ObservationPartition::locate(const Observation& obs) const {
  if (obs.size() != landmarks_) {
    throw std::invalid_argument("ObservationPartition: observation has wrong landmark count");
  }
  std::size_t index = 0;
  for (std::size_t i = landmarks_; i-- > 0;) {
    index = index * reading_cells() + locate_reading(obs[i]);
  }
  return index;
}

ObservationPartition build_observation_partition(const SensorConfig& sensor, std::size_t n) {
  return ObservationPartition(sensor, n, n);
}

}  // namespace aslam
