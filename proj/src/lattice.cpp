#include "aslam/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aslam {

FiniteSpace::FiniteSpace(std::vector<std::vector<double>> points) : points_(std::move(points)) {
  for (const auto& p : points_) {
    if (p.size() != points_.front().size()) {
      throw std::invalid_argument("FiniteSpace: points have mixed dimensions");
    }
  }
  distances_ = DistanceMatrix::euclidean(points_);
}

bool Box::contains(std::span<const double> x) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] >= lo[k] && x[k] <= hi[k])) return false;
  }
  return true;
}

Box Box::square(double half_width, std::size_t copies) {
  Box box;
  box.lo.assign(2 * copies, -half_width);
  box.hi.assign(2 * copies, half_width);
  return box;
}

BoxLattice::BoxLattice(Box workspace, std::vector<std::size_t> cells_per_axis)
    : workspace_(std::move(workspace)), counts_(std::move(cells_per_axis)) {
  const std::size_t d = workspace_.dim();
  if (d == 0 || counts_.size() != d || workspace_.hi.size() != d) {
    throw std::invalid_argument("BoxLattice: dimension mismatch");
  }
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) {
    if (counts_[k] == 0 || !(workspace_.hi[k] > workspace_.lo[k])) {
      throw std::invalid_argument("BoxLattice: empty axis");
    }
    total *= counts_[k];
  }
  std::vector<std::vector<double>> points;
  points.reserve(total);
  std::vector<std::size_t> digit(d, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::vector<double> p(d);
    for (std::size_t k = 0; k < d; ++k) {
      const double side = (workspace_.hi[k] - workspace_.lo[k]) / static_cast<double>(counts_[k]);
      p[k] = workspace_.lo[k] + (static_cast<double>(digit[k]) + 0.5) * side;
    }
    points.push_back(std::move(p));
    for (std::size_t k = 0; k < d; ++k) {
      if (++digit[k] < counts_[k]) break;
      digit[k] = 0;
    }
  }
  space_ = FiniteSpace(std::move(points));
}

Box BoxLattice::cell(std::size_t i) const {
  Box box;
  std::size_t rest = i;
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    const std::size_t digit = rest % counts_[k];
    rest /= counts_[k];
    const double side = (workspace_.hi[k] - workspace_.lo[k]) / static_cast<double>(counts_[k]);
    box.lo.push_back(workspace_.lo[k] + static_cast<double>(digit) * side);
    box.hi.push_back(digit + 1 == counts_[k] ? workspace_.hi[k]
                                             : workspace_.lo[k] + static_cast<double>(digit + 1) * side);
  }
  return box;
}

std::optional<std::size_t> BoxLattice::locate(std::span<const double> x) const {
  if (!workspace_.contains(x)) {
    return std::nullopt;
  }
  std::size_t index = 0;
  std::size_t stride = 1;
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    const double side = (workspace_.hi[k] - workspace_.lo[k]) / static_cast<double>(counts_[k]);
    auto digit = static_cast<std::size_t>(std::floor((x[k] - workspace_.lo[k]) / side));
    digit = std::min(digit, counts_[k] - 1);
    index += digit * stride;
    stride *= counts_[k];
  }
  return index;
}

double BoxLattice::normalized_covering_radius() const {
  double sum = 0.0;
  for (std::size_t count : counts_) {
    const double half = 0.5 / static_cast<double>(count);
    sum += half * half;
  }
  return std::sqrt(sum);
}

std::vector<double> BoxLattice::edges(std::size_t axis) const {
  const std::size_t count = counts_.at(axis);
  std::vector<double> e(count + 1);
  const double side = (workspace_.hi[axis] - workspace_.lo[axis]) / static_cast<double>(count);
  for (std::size_t j = 0; j <= count; ++j) {
    e[j] = workspace_.lo[axis] + static_cast<double>(j) * side;
  }
  e[count] = workspace_.hi[axis];
  return e;
}

BoxLattice build_state_lattice(const Box& workspace, std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("build_state_lattice: n must be >= 1");
  }
  const auto d = static_cast<double>(workspace.dim());
  // Half-diagonal sqrt(d)/(2k) of a unit-side cell must stay below 1/n.
  const auto k = std::max(n, static_cast<std::size_t>(std::floor(static_cast<double>(n) * std::sqrt(d) / 2.0)) + 1);
  return BoxLattice(workspace, std::vector<std::size_t>(workspace.dim(), k));
}

std::vector<Vec2> build_action_net(double v_max, std::size_t n) {
  if (n == 0 || !(v_max > 0.0)) {
    throw std::invalid_argument("build_action_net: need n >= 1 and v_max > 0");
  }
  const double radius = (1.0 / static_cast<double>(n)) * (1.0 - 1e-9);
  const double spacing = radius * std::sqrt(3.0);
  const double reach = v_max + radius;
  const auto span = static_cast<long>(std::ceil(reach / (spacing * std::sqrt(3.0) / 2.0))) + 1;

  std::vector<Vec2> net;
  for (long j = -span; j <= span; ++j) {
    for (long i = -2 * span; i <= 2 * span; ++i) {
      const Vec2 p{spacing * (static_cast<double>(i) + 0.5 * static_cast<double>(j)),
                   spacing * std::sqrt(3.0) / 2.0 * static_cast<double>(j)};
      const double r = p.norm();
      if (r >= reach) continue;
      // Projection onto the disc is nonexpansive, so projected points still
      // cover their Voronoi cells within the disc.
      net.push_back(r > v_max ? (v_max / r) * p : p);
    }
  }
  auto key = [](Vec2 p) { return std::pair{std::round(p.norm() * 1e9), std::atan2(p.y, p.x)}; };
  std::sort(net.begin(), net.end(), [&](Vec2 a, Vec2 b) { return key(a) < key(b); });
  net.erase(std::unique(net.begin(), net.end(), [](Vec2 a, Vec2 b) { return (a - b).norm() < 1e-9; }), net.end());
  return net;
}

}  // namespace aslam
